#pragma once

// Canonical labeling and isomorphism filtering of hypergraphs.
//
// Works on the bipartite incidence graph (vertex nodes, edge nodes). Colour
// refinement brings the partition to an equitable one; a search tree then
// individualizes vertex nodes until the vertex side is discrete. The
// canonical leaf is the one with the greatest sequence of refinement traces,
// ties broken by the smallest certificate (sorted relabeled edge list).
// Subtrees are cut by trace comparison and by orbits of automorphisms found
// along the way.

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ks/mmp.hpp"

namespace ks {

/// MMP line of the canonically relabeled hypergraph: vertices 0..V-1, each
/// edge sorted, edges sorted. Equal forms <=> isomorphic hypergraphs.
struct CanonicalForm {
  std::string line;
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalLabeling {
  CanonicalForm form;
  /// order[i] is the original vertex id that receives canonical label i.
  std::vector<VertexId> order;
  /// Search statistics.
  std::size_t nodes_visited = 0;
  std::size_t automorphisms_found = 0;
};

CanonicalLabeling canonical_labeling(const Hypergraph& h);
CanonicalForm canonical_form(const Hypergraph& h);

struct IsoMapping {
  /// (vertex of h1, vertex of h2) pairs, one per vertex of h1, ascending in h1.
  std::vector<std::pair<VertexId, VertexId>> vertex_map;
  /// edge_map[i] is the index in h2 of the image of h1's edge i.
  std::vector<std::size_t> edge_map;
};

std::optional<IsoMapping> are_isomorphic(const Hypergraph& h1, const Hypergraph& h2);

/// Applies the mapping to h1 and checks that it reproduces h2's edge set exactly.
bool verify_mapping(const Hypergraph& h1, const Hypergraph& h2, const IsoMapping& m);

/// Applies a vertex relabeling (indexed by old id) to every edge.
Hypergraph relabel(const Hypergraph& h, const std::vector<VertexId>& new_id);

/// Insert-if-absent set of canonical forms.
class IsomorphismFilter {
 public:
  /// True if `h` opens a new class.
  bool insert(const Hypergraph& h) { return insert(canonical_form(h)); }
  bool insert(CanonicalForm form) { return seen_.insert(std::move(form.line)).second; }
  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<std::string> seen_;
};

/// First representative of each class, in order of first appearance.
std::vector<Hypergraph> dedupe_isomorphic(const std::vector<Hypergraph>& hs);

}  // namespace ks
