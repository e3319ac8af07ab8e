#pragma once

// The 600-cell's 60 rays and 75 orthogonal bases, and exact checks of
// vector assignments over the golden field.

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ks/golden.hpp"
#include "ks/mmp.hpp"

namespace ks {

using Golden = GoldenNumber<long long>;

template <class Scalar>
using RayT = Eigen::Matrix<GoldenNumber<Scalar>, 4, 1>;
using Ray = RayT<long long>;

template <class Scalar>
GoldenNumber<Scalar> inner_product(const RayT<Scalar>& u, const RayT<Scalar>& v) {
  return u.dot(v);
}

/// Scales so the first nonzero component is positive; antipodes coincide.
Ray canonical_direction(const Ray& r);

/// Lexicographic by component value.
bool ray_less(const Ray& u, const Ray& v);

struct RaySet600 {
  std::vector<Ray> rays;                           // sorted by ray_less
  std::vector<std::array<std::size_t, 4>> bases;   // sorted, members ascending
  Hypergraph hypergraph;                           // vertex i is rays[i]
};

/// Coordinates are twice the unit-radius 600-cell coordinates, so every
/// component lies in Z[tau]. Throws std::logic_error if counts come out wrong.
RaySet600 build_600cell();

/// The 120 polytope vertices (same scaling), before antipodes are merged.
std::vector<Ray> cell600_vertices();

struct Orthogonality {
  std::size_t edge;
  VertexId u;
  VertexId v;
  Golden product;
};

/// Every within-edge pair with a nonzero inner product, plus vertices that
/// have no vector or a zero vector (reported with edge == SIZE_MAX).
struct AssignmentReport {
  std::vector<Orthogonality> violations;
  std::vector<VertexId> missing;
  bool ok() const { return violations.empty() && missing.empty(); }
};

AssignmentReport verify_assignment(const Hypergraph& h, const std::map<VertexId, Ray>& assignment);

/// Vector files: one ray per line, four whitespace separated tokens.
/// Accepted tokens are "a+bt"/"a-bt" pairs, plain integers, and the shorthand
/// t, k (1/t) with an optional leading '-'. '#' starts a comment line.
std::vector<Ray> parse_vectors(std::istream& in);
Ray parse_ray(const std::string& line);
Golden parse_golden(const std::string& token);

/// One line per ray in "a+bt" form.
void write_vectors(std::ostream& out, const std::vector<Ray>& rays);

}  // namespace ks
