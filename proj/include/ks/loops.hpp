#pragma once

// Loops (n-gons): cyclic sequences of n >= 3 distinct edges e_0..e_{n-1}
// where e_i and e_{i+1 mod n} share exactly one vertex, the joint v_i, and
// edges that are not neighbours on the cycle share none. Such a loop can be
// drawn as a regular polygon with the joints at its corners.

#include <cstddef>
#include <string>
#include <vector>

#include "ks/mmp.hpp"

namespace ks {

struct Loop {
  std::vector<std::size_t> edges;
  std::vector<VertexId> joints;
  std::size_t size() const { return edges.size(); }
};

/// Checks n >= 3, distinct edges, and the intersection pattern above.
bool is_valid_loop(const Hypergraph& h, const Loop& loop);

struct BiggestLoop {
  std::size_t size = 0;  // 0 when the hypergraph has no loop
  Loop witness;
};

BiggestLoop biggest_loop(const Hypergraph& h);

enum class LoopEquivalence {
  Rotation,              // a loop and its reversal count separately
  RotationAndReflection,
};

/// Every loop of exactly n edges, one per class under the chosen equivalence
/// of the edge sequence (the joints follow from the edges). Each class is
/// reported starting at its smallest edge; under Rotation a loop is followed
/// by its reversal.
std::vector<Loop> loop_arrangements(const Hypergraph& h, std::size_t n,
                                    LoopEquivalence eq = LoopEquivalence::Rotation);

struct EdgeClassification {
  std::vector<std::size_t> polygon;
  std::vector<std::size_t> free;
  std::vector<std::size_t> span;
  std::vector<VertexId> loop_vertices;
  std::vector<VertexId> free_vertices;
};

EdgeClassification classify_edges(const Hypergraph& h, const Loop& loop);

/// Text listing: the polygon edges in loop order, each written from its
/// incoming joint to its outgoing joint, then '.', then every other edge with
/// loop vertices marked '*' and free vertices marked '.', space separated.
std::string annotate_loop(const Hypergraph& h, const Loop& loop);

}  // namespace ks
