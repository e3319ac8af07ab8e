#include "ks/coloring.hpp"

#include <algorithm>

namespace ks {

namespace {

constexpr std::int8_t kUnset = -1;

// Backtracking search with unit propagation. Setting a vertex to 1 zeroes
// every co-edge vertex; an edge with all but one vertex at 0 forces the last
// to 1; an edge of zeros, or with two ones, is a contradiction.
class Solver {
 public:
  explicit Solver(const Hypergraph& h) : h_(h), incident_(h.id_space()) {
    for (std::size_t e = 0; e < h.edge_count(); ++e)
      for (auto v : h.edge(e)) incident_[v].push_back(static_cast<std::uint32_t>(e));
  }

  std::optional<Coloring> solve() {
    State s;
    s.value.assign(h_.id_space(), kUnset);
    s.ones.assign(h_.edge_count(), 0);
    s.zeros.assign(h_.edge_count(), 0);
    if (!search(s)) return std::nullopt;
    Coloring c;
    c.value.resize(h_.id_space());
    for (std::size_t v = 0; v < c.value.size(); ++v) c.value[v] = s.value[v] == 1 ? 1 : 0;
    return c;
  }

 private:
  struct State {
    std::vector<std::int8_t> value;
    std::vector<std::uint8_t> ones;
    std::vector<std::uint8_t> zeros;
  };

  bool assign(State& s, VertexId v0, std::int8_t val0) {
    stack_.clear();
    stack_.push_back({v0, val0});
    while (!stack_.empty()) {
      auto [v, val] = stack_.back();
      stack_.pop_back();
      if (s.value[v] != kUnset) {
        if (s.value[v] != val) return false;
        continue;
      }
      s.value[v] = val;
      for (auto e : incident_[v]) {
        auto edge = h_.edge(e);
        if (val == 1) {
          if (s.ones[e]++ > 0) return false;
          for (auto u : edge)
            if (u != v && s.value[u] == kUnset) stack_.push_back({u, 0});
        } else {
          ++s.zeros[e];
          if (s.zeros[e] == edge.size()) return false;
          if (s.ones[e] == 0 && s.zeros[e] + 1u == edge.size()) {
            for (auto u : edge)
              if (s.value[u] == kUnset) stack_.push_back({u, 1});
          }
        }
      }
    }
    return true;
  }

  // Among edges without a 1, the one with fewest undetermined vertices;
  // within it the unset vertex of largest degree, lowest id on ties.
  std::optional<VertexId> choose(const State& s) const {
    std::size_t best_edge = h_.edge_count();
    std::size_t best_free = SIZE_MAX;
    for (std::size_t e = 0; e < h_.edge_count(); ++e) {
      if (s.ones[e] > 0) continue;
      std::size_t free = h_.edge(e).size() - s.zeros[e];
      if (free < best_free) {
        best_free = free;
        best_edge = e;
      }
    }
    if (best_edge == h_.edge_count()) return std::nullopt;
    std::optional<VertexId> pick;
    for (auto v : h_.sorted_edge(best_edge)) {
      if (s.value[v] != kUnset) continue;
      if (!pick || incident_[v].size() > incident_[*pick].size()) pick = v;
    }
    return pick;
  }

  bool search(State& s) {
    auto v = choose(s);
    if (!v) return true;  // every edge already has its 1
    {
      State t = s;
      if (assign(t, *v, 1) && search(t)) {
        s = std::move(t);
        return true;
      }
    }
    if (!assign(s, *v, 0)) return false;
    return search(s);
  }

  const Hypergraph& h_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<std::pair<VertexId, std::int8_t>> stack_;
};

}  // namespace

bool is_valid_coloring(const Hypergraph& h, const Coloring& c) {
  if (c.value.size() < h.id_space()) return false;
  for (const auto& e : h.edges()) {
    int ones = 0;
    for (auto v : e) ones += c.value[v] == 1 ? 1 : 0;
    if (ones != 1) return false;
  }
  return true;
}

ColorResult is_colorable(const Hypergraph& h) {
  auto witness = Solver(h).solve();
  ColorResult r;
  r.colorable = witness.has_value();
  r.witness = std::move(witness);
  return r;
}

bool is_critical(const Hypergraph& h) {
  if (!is_ks(h)) return false;
  for (std::size_t e = 0; e < h.edge_count(); ++e)
    if (is_ks(h.without_edge(e))) return false;
  return true;
}

bool has_parity_proof(const Hypergraph& h) {
  if (h.edge_count() % 2 == 0) return false;
  auto deg = h.degrees();
  return std::all_of(deg.begin(), deg.end(), [](std::size_t d) { return d % 2 == 0; });
}

KsVerdict classify(const Hypergraph& h, bool check_criticality) {
  KsVerdict v;
  auto r = is_colorable(h);
  v.colorable = r.colorable;
  v.witness = std::move(r.witness);
  if (!v.colorable && check_criticality) v.critical = is_critical(h);
  v.parity = has_parity_proof(h);
  return v;
}

}  // namespace ks
