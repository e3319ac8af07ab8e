#include "ks/canon.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>

namespace ks {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  h *= 0xFF51AFD7ED558CCDULL;
  return h ^ (h >> 33);
}

// Incidence graph: nodes [0, V) are vertices, [V, V + E) edges.
struct IncidenceGraph {
  int num_vertices = 0;
  int num_nodes = 0;
  std::vector<std::vector<int>> adj;
  std::vector<VertexId> original;  // dense vertex -> original id
};

IncidenceGraph build_graph(const Hypergraph& h) {
  IncidenceGraph g;
  g.original = h.vertices();
  std::vector<int> dense(h.id_space(), -1);
  for (std::size_t i = 0; i < g.original.size(); ++i) dense[g.original[i]] = static_cast<int>(i);
  g.num_vertices = static_cast<int>(g.original.size());
  g.num_nodes = g.num_vertices + static_cast<int>(h.edge_count());
  g.adj.resize(static_cast<std::size_t>(g.num_nodes));
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    int en = g.num_vertices + static_cast<int>(e);
    for (auto v : h.edge(e)) {
      g.adj[static_cast<std::size_t>(en)].push_back(dense[v]);
      g.adj[static_cast<std::size_t>(dense[v])].push_back(en);
    }
  }
  return g;
}

// Ordered partition of the nodes. Cells are contiguous ranges of `lab`
// identified by their start position.
struct Partition {
  std::vector<int> lab;   // position -> node
  std::vector<int> pos;   // node -> position
  std::vector<int> cell;  // node -> cell start
  std::vector<int> end;   // cell start -> one past last position
};

class Refiner {
 public:
  explicit Refiner(const IncidenceGraph& g)
      : g_(g), count_(static_cast<std::size_t>(g.num_nodes), 0), queued_(static_cast<std::size_t>(g.num_nodes), 0) {}

  // Refines to the coarsest equitable partition finer than `p`, starting from
  // the given splitter cells. Returns a trace hash of the splitting events.
  std::uint64_t refine(Partition& p, const std::vector<int>& splitters) {
    std::uint64_t trace = 0x243F6A8885A308D3ULL;
    std::deque<int> queue;
    for (int s : splitters) {
      queue.push_back(s);
      queued_[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<int> touched;
    std::vector<int> cells;
    std::vector<int> members;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      queued_[static_cast<std::size_t>(s)] = 0;

      touched.clear();
      for (int i = s; i < p.end[static_cast<std::size_t>(s)]; ++i)
        for (int y : g_.adj[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(i)])])
          if (count_[static_cast<std::size_t>(y)]++ == 0) touched.push_back(y);

      cells.clear();
      for (int y : touched) cells.push_back(p.cell[static_cast<std::size_t>(y)]);
      std::sort(cells.begin(), cells.end());
      cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

      trace = mix(trace, static_cast<std::uint64_t>(s));
      for (int c : cells) {
        int cend = p.end[static_cast<std::size_t>(c)];
        members.assign(p.lab.begin() + c, p.lab.begin() + cend);
        std::stable_sort(members.begin(), members.end(), [&](int a, int b) {
          return count_[static_cast<std::size_t>(a)] < count_[static_cast<std::size_t>(b)];
        });
        int lo = count_[static_cast<std::size_t>(members.front())];
        int hi = count_[static_cast<std::size_t>(members.back())];
        trace = mix(trace, (static_cast<std::uint64_t>(c) << 32) ^ static_cast<std::uint64_t>(lo));
        if (lo == hi) continue;

        bool was_queued = queued_[static_cast<std::size_t>(c)] != 0;
        int largest = -1;
        int largest_size = 0;
        std::vector<int> fragments;
        int start = c;
        for (int i = 0; i < cend - c; ++i) {
          int node = members[static_cast<std::size_t>(i)];
          p.lab[static_cast<std::size_t>(c + i)] = node;
          p.pos[static_cast<std::size_t>(node)] = c + i;
          bool last = i + 1 == cend - c ||
                      count_[static_cast<std::size_t>(members[static_cast<std::size_t>(i + 1)])] !=
                          count_[static_cast<std::size_t>(node)];
          if (last) {
            int stop = c + i + 1;
            for (int j = start; j < stop; ++j) p.cell[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(j)])] = start;
            p.end[static_cast<std::size_t>(start)] = stop;
            fragments.push_back(start);
            trace = mix(trace, (static_cast<std::uint64_t>(count_[static_cast<std::size_t>(node)]) << 32) ^
                                   static_cast<std::uint64_t>(stop - start));
            if (stop - start > largest_size) {
              largest_size = stop - start;
              largest = start;
            }
            start = stop;
          }
        }
        for (int f : fragments) {
          if (was_queued ? f == c : f == largest) continue;
          if (!queued_[static_cast<std::size_t>(f)]) {
            queued_[static_cast<std::size_t>(f)] = 1;
            queue.push_back(f);
          }
        }
      }
      for (int y : touched) count_[static_cast<std::size_t>(y)] = 0;
    }
    return trace;
  }

 private:
  const IncidenceGraph& g_;
  std::vector<int> count_;
  std::vector<char> queued_;
};

struct Leaf {
  std::vector<std::uint64_t> traces;
  std::vector<std::uint32_t> certificate;
  std::vector<int> vertex_order;  // canonical label -> dense vertex
};

// Returns <0, 0, >0 comparing lexicographically.
int compare_traces(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, std::size_t upto) {
  std::size_t n = std::min({a.size(), b.size(), upto});
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  if (upto <= n) return 0;
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

class CanonSearch {
 public:
  explicit CanonSearch(const Hypergraph& h) : h_(h), g_(build_graph(h)), refiner_(g_) {}

  CanonicalLabeling run() {
    Partition p;
    auto n = static_cast<std::size_t>(g_.num_nodes);
    p.lab.resize(n);
    std::iota(p.lab.begin(), p.lab.end(), 0);
    p.pos = p.lab;
    p.cell.resize(n);
    p.end.assign(n, 0);
    std::vector<int> splitters;
    if (g_.num_vertices > 0) {
      for (int i = 0; i < g_.num_vertices; ++i) p.cell[static_cast<std::size_t>(i)] = 0;
      p.end[0] = g_.num_vertices;
      splitters.push_back(0);
    }
    if (g_.num_nodes > g_.num_vertices) {
      for (int i = g_.num_vertices; i < g_.num_nodes; ++i) p.cell[static_cast<std::size_t>(i)] = g_.num_vertices;
      p.end[static_cast<std::size_t>(g_.num_vertices)] = g_.num_nodes;
      splitters.push_back(g_.num_vertices);
    }
    std::vector<std::uint64_t> traces{refiner_.refine(p, splitters)};
    std::vector<int> path;
    search(p, traces, path);

    CanonicalLabeling out;
    out.nodes_visited = nodes_;
    out.automorphisms_found = generators_.size();
    std::vector<VertexId> new_id(h_.id_space(), 0);
    for (std::size_t i = 0; i < best_->vertex_order.size(); ++i) {
      VertexId orig = g_.original[static_cast<std::size_t>(best_->vertex_order[i])];
      out.order.push_back(orig);
      new_id[orig] = static_cast<VertexId>(i);
    }
    auto relabeled = relabel(h_, new_id);
    std::vector<std::vector<VertexId>> edges;
    for (std::size_t e = 0; e < relabeled.edge_count(); ++e) {
      auto s = relabeled.sorted_edge(e);
      edges.emplace_back(s.begin(), s.end());
    }
    std::sort(edges.begin(), edges.end());
    out.form.line = serialize_mmp(Hypergraph(std::move(edges)));
    return out;
  }

 private:
  int target_cell(const Partition& p) const {
    int best = -1;
    int best_size = 0;
    for (int c = 0; c < g_.num_vertices; c = p.end[static_cast<std::size_t>(c)]) {
      int size = p.end[static_cast<std::size_t>(c)] - c;
      if (size > 1 && (best < 0 || size < best_size)) {
        best = c;
        best_size = size;
      }
    }
    return best;
  }

  Leaf make_leaf(const Partition& p, const std::vector<std::uint64_t>& traces) const {
    Leaf leaf;
    leaf.traces = traces;
    leaf.vertex_order.assign(p.lab.begin(), p.lab.begin() + g_.num_vertices);
    std::vector<std::vector<std::uint32_t>> edges;
    edges.reserve(static_cast<std::size_t>(g_.num_nodes - g_.num_vertices));
    for (int e = g_.num_vertices; e < g_.num_nodes; ++e) {
      std::vector<std::uint32_t> labels;
      for (int v : g_.adj[static_cast<std::size_t>(e)]) labels.push_back(static_cast<std::uint32_t>(p.pos[static_cast<std::size_t>(v)]));
      std::sort(labels.begin(), labels.end());
      edges.push_back(std::move(labels));
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) {
      leaf.certificate.push_back(static_cast<std::uint32_t>(e.size()));
      leaf.certificate.insert(leaf.certificate.end(), e.begin(), e.end());
    }
    return leaf;
  }

  void record_automorphism(const Leaf& a, const Leaf& b) {
    std::vector<int> perm(static_cast<std::size_t>(g_.num_vertices));
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      perm[static_cast<std::size_t>(a.vertex_order[i])] = b.vertex_order[i];
      identity = identity && a.vertex_order[i] == b.vertex_order[i];
    }
    if (!identity) generators_.push_back(std::move(perm));
  }

  void visit_leaf(const Partition& p, const std::vector<std::uint64_t>& traces) {
    Leaf leaf = make_leaf(p, traces);
    if (!first_) {
      first_ = leaf;
      best_ = std::move(leaf);
      return;
    }
    if (compare_traces(leaf.traces, first_->traces, SIZE_MAX) == 0 && leaf.certificate == first_->certificate) {
      record_automorphism(*first_, leaf);
      return;
    }
    int c = compare_traces(leaf.traces, best_->traces, SIZE_MAX);
    if (c > 0 || (c == 0 && leaf.certificate < best_->certificate)) {
      best_ = std::move(leaf);
    } else if (c == 0 && leaf.certificate == best_->certificate) {
      record_automorphism(*best_, leaf);
    }
  }

  // Orbit representatives under generators that fix every vertex on `path`.
  std::vector<int> orbit_roots(const std::vector<int>& path) const {
    std::vector<int> parent(static_cast<std::size_t>(g_.num_vertices));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x)
        x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      return x;
    };
    for (const auto& gen : generators_) {
      bool fixes = std::all_of(path.begin(), path.end(), [&](int v) { return gen[static_cast<std::size_t>(v)] == v; });
      if (!fixes) continue;
      for (int v = 0; v < g_.num_vertices; ++v) {
        int a = find(v);
        int b = find(gen[static_cast<std::size_t>(v)]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    for (int v = 0; v < g_.num_vertices; ++v) parent[static_cast<std::size_t>(v)] = find(v);
    return parent;
  }

  void search(const Partition& p, std::vector<std::uint64_t>& traces, std::vector<int>& path) {
    ++nodes_;
    if (best_ && compare_traces(traces, best_->traces, traces.size()) < 0) return;

    int c = target_cell(p);
    if (c < 0) {
      visit_leaf(p, traces);
      return;
    }

    std::vector<int> children(p.lab.begin() + c, p.lab.begin() + p.end[static_cast<std::size_t>(c)]);
    std::sort(children.begin(), children.end());
    std::vector<int> explored_roots;
    std::size_t gens_seen = SIZE_MAX;
    std::vector<int> roots;
    for (int w : children) {
      if (generators_.size() != gens_seen) {
        roots = orbit_roots(path);
        gens_seen = generators_.size();
        for (auto& r : explored_roots) r = roots[static_cast<std::size_t>(r)];
      }
      int root = roots.empty() ? w : roots[static_cast<std::size_t>(w)];
      if (std::find(explored_roots.begin(), explored_roots.end(), root) != explored_roots.end()) continue;
      explored_roots.push_back(root);

      Partition q = p;
      int pw = q.pos[static_cast<std::size_t>(w)];
      int other = q.lab[static_cast<std::size_t>(c)];
      std::swap(q.lab[static_cast<std::size_t>(c)], q.lab[static_cast<std::size_t>(pw)]);
      q.pos[static_cast<std::size_t>(w)] = c;
      q.pos[static_cast<std::size_t>(other)] = pw;
      int cend = q.end[static_cast<std::size_t>(c)];
      q.end[static_cast<std::size_t>(c)] = c + 1;
      q.end[static_cast<std::size_t>(c + 1)] = cend;
      for (int i = c + 1; i < cend; ++i) q.cell[static_cast<std::size_t>(q.lab[static_cast<std::size_t>(i)])] = c + 1;
      q.cell[static_cast<std::size_t>(w)] = c;

      std::uint64_t t = mix(refiner_.refine(q, {c}), (static_cast<std::uint64_t>(c) << 32) ^ static_cast<std::uint64_t>(cend - c));
      traces.push_back(t);
      path.push_back(w);
      search(q, traces, path);
      path.pop_back();
      traces.pop_back();
    }
  }

  const Hypergraph& h_;
  IncidenceGraph g_;
  Refiner refiner_;
  std::optional<Leaf> first_;
  std::optional<Leaf> best_;
  std::vector<std::vector<int>> generators_;
  std::size_t nodes_ = 0;
};

}  // namespace

Hypergraph relabel(const Hypergraph& h, const std::vector<VertexId>& new_id) {
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(h.edge_count());
  for (const auto& e : h.edges()) {
    std::vector<VertexId> m;
    m.reserve(e.size());
    for (auto v : e) m.push_back(new_id.at(v));
    edges.push_back(std::move(m));
  }
  return Hypergraph(std::move(edges), h.label());
}

CanonicalLabeling canonical_labeling(const Hypergraph& h) {
  if (h.edge_count() == 0) return {CanonicalForm{"."}, {}, 0, 0};
  return CanonSearch(h).run();
}

CanonicalForm canonical_form(const Hypergraph& h) { return canonical_labeling(h).form; }

std::optional<IsoMapping> are_isomorphic(const Hypergraph& h1, const Hypergraph& h2) {
  if (h1.edge_count() != h2.edge_count() || h1.vertex_count() != h2.vertex_count()) return std::nullopt;
  auto a = canonical_labeling(h1);
  auto b = canonical_labeling(h2);
  if (a.form != b.form) return std::nullopt;

  IsoMapping m;
  std::vector<VertexId> image(h1.id_space(), 0);
  for (std::size_t i = 0; i < a.order.size(); ++i) {
    m.vertex_map.emplace_back(a.order[i], b.order[i]);
    image[a.order[i]] = b.order[i];
  }
  std::sort(m.vertex_map.begin(), m.vertex_map.end());

  std::map<std::vector<VertexId>, std::size_t> index;
  for (std::size_t e = 0; e < h2.edge_count(); ++e) {
    auto s = h2.sorted_edge(e);
    index.emplace(std::vector<VertexId>(s.begin(), s.end()), e);
  }
  for (std::size_t e = 0; e < h1.edge_count(); ++e) {
    std::vector<VertexId> mapped;
    for (auto v : h1.edge(e)) mapped.push_back(image[v]);
    std::sort(mapped.begin(), mapped.end());
    auto it = index.find(mapped);
    if (it == index.end()) return std::nullopt;
    m.edge_map.push_back(it->second);
  }
  return m;
}

bool verify_mapping(const Hypergraph& h1, const Hypergraph& h2, const IsoMapping& m) {
  if (h1.edge_count() != h2.edge_count() || m.edge_map.size() != h1.edge_count()) return false;
  std::map<VertexId, VertexId> image;
  std::vector<VertexId> targets;
  for (auto [from, to] : m.vertex_map) {
    if (!image.emplace(from, to).second) return false;
    targets.push_back(to);
  }
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) return false;

  std::vector<char> hit(h2.edge_count(), 0);
  for (std::size_t e = 0; e < h1.edge_count(); ++e) {
    std::vector<VertexId> mapped;
    for (auto v : h1.edge(e)) {
      auto it = image.find(v);
      if (it == image.end()) return false;
      mapped.push_back(it->second);
    }
    std::sort(mapped.begin(), mapped.end());
    auto j = m.edge_map[e];
    if (j >= h2.edge_count() || hit[j]) return false;
    auto s = h2.sorted_edge(j);
    if (!std::equal(mapped.begin(), mapped.end(), s.begin(), s.end())) return false;
    hit[j] = 1;
  }
  return true;
}

std::vector<Hypergraph> dedupe_isomorphic(const std::vector<Hypergraph>& hs) {
  IsomorphismFilter filter;
  std::vector<Hypergraph> out;
  for (const auto& h : hs)
    if (filter.insert(h)) out.push_back(h);
  return out;
}

}  // namespace ks
