#include "ks/loops.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>

namespace ks {

namespace {

// Depth-first search over edge paths e_0, e_1, ... where e_0 is the smallest
// edge of the loop and every later edge is larger. A new edge must meet the
// current one in exactly one vertex and touch no other path edge, except that
// meeting e_0 in one vertex closes the loop. A path is cut when its length
// plus the number of edges still reachable falls short of min_length().
class LoopSearch {
 public:
  explicit LoopSearch(const Hypergraph& h)
      : h_(h), incident_(h.id_space()), neighbours_(h.edge_count()), visited_(h.edge_count(), 0),
        covered_(h.id_space(), 0), stamp_(h.edge_count(), 0) {
    for (std::size_t e = 0; e < h.edge_count(); ++e)
      for (auto v : h.edge(e)) incident_[v].push_back(e);
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      auto& nb = neighbours_[e];
      for (auto v : h.edge(e))
        for (auto f : incident_[v])
          if (f != e) nb.push_back(f);
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  using ClosedLoop = std::function<void(const Loop&)>;

  // Visits every loop whose smallest edge is `start` and whose length is at
  // least min_length() (re-read as the search goes) and at most max_length.
  void run(std::size_t start, std::function<std::size_t()> min_length, std::size_t max_length, const ClosedLoop& on_loop) {
    start_ = start;
    min_length_ = std::move(min_length);
    max_length_ = max_length;
    on_loop_ = &on_loop;
    path_.edges.assign(1, start);
    path_.joints.clear();
    push(start);
    extend();
    pop(start);
  }

 private:
  void push(std::size_t e) {
    visited_[e] = 1;
    for (auto v : h_.edge(e)) ++covered_[v];
  }
  void pop(std::size_t e) {
    visited_[e] = 0;
    for (auto v : h_.edge(e)) --covered_[v];
  }

  bool in_edge(std::size_t e, VertexId v) const {
    auto s = h_.sorted_edge(e);
    return std::binary_search(s.begin(), s.end(), v);
  }

  // Edges that could still join the path: larger than start, unused, and
  // touching only vertices of the current edge, of e_0, or uncovered ones.
  bool open(std::size_t x, std::size_t cur) const {
    if (x <= start_ || visited_[x]) return false;
    for (auto u : h_.edge(x))
      if (covered_[u] && !in_edge(cur, u) && !in_edge(start_, u)) return false;
    return true;
  }

  std::size_t reachable_from(std::size_t cur) {
    ++epoch_;
    queue_.clear();
    queue_.push_back(cur);
    std::size_t count = 0;
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      for (auto x : neighbours_[queue_[i]]) {
        if (stamp_[x] == epoch_ || !open(x, cur)) continue;
        stamp_[x] = epoch_;
        ++count;
        queue_.push_back(x);
      }
    }
    return count;
  }

  void extend() {
    std::size_t cur = path_.edges.back();
    std::size_t len = path_.edges.size();
    if (len + 1 > max_length_) return;
    for (auto x : neighbours_[cur]) {
      if (x <= start_ || visited_[x]) continue;
      // x must meet cur in one vertex that lies in no other path edge.
      std::optional<VertexId> joint;
      std::optional<VertexId> closing;
      bool ok = true;
      for (auto u : h_.edge(x)) {
        if (!covered_[u]) continue;
        if (in_edge(cur, u) && covered_[u] == 1 && !joint) {
          joint = u;
        } else if (cur != start_ && in_edge(start_, u) && covered_[u] == 1 && !closing) {
          closing = u;
        } else {
          ok = false;
          break;
        }
      }
      if (!ok || !joint) continue;
      path_.edges.push_back(x);
      path_.joints.push_back(*joint);
      if (closing) {
        if (len + 1 >= 3 && len + 1 >= min_length_()) {
          path_.joints.push_back(*closing);
          (*on_loop_)(path_);
          path_.joints.pop_back();
        }
      } else {
        push(x);
        if (len + 1 + reachable_from(x) >= min_length_()) extend();
        pop(x);
      }
      path_.edges.pop_back();
      path_.joints.pop_back();
    }
  }

  const Hypergraph& h_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<std::size_t>> neighbours_;
  std::vector<char> visited_;
  std::vector<int> covered_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::vector<std::size_t> queue_;
  std::size_t start_ = 0;
  std::function<std::size_t()> min_length_;
  std::size_t max_length_ = 0;
  const ClosedLoop* on_loop_ = nullptr;
  Loop path_;
};

}  // namespace

bool is_valid_loop(const Hypergraph& h, const Loop& loop) {
  std::size_t n = loop.edges.size();
  if (n < 3 || loop.joints.size() != n) return false;
  auto edges = loop.edges;
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end() || edges.back() >= h.edge_count()) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto a = h.sorted_edge(loop.edges[i]);
      auto b = h.sorted_edge(loop.edges[j]);
      std::vector<VertexId> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (j == i + 1) {
        if (common.size() != 1 || common[0] != loop.joints[i]) return false;
      } else if (i == 0 && j == n - 1) {
        if (common.size() != 1 || common[0] != loop.joints[n - 1]) return false;
      } else if (!common.empty()) {
        return false;
      }
    }
  return true;
}

BiggestLoop biggest_loop(const Hypergraph& h) {
  BiggestLoop best;
  LoopSearch search(h);
  std::size_t e = h.edge_count();
  for (std::size_t start = 0; start < e; ++start) {
    if (e - start <= best.size) break;
    search.run(
        start, [&] { return std::max<std::size_t>(best.size + 1, 3); }, e,
        [&](const Loop& loop) {
          if (loop.size() > best.size) {
            best.size = loop.size();
            best.witness = loop;
          }
        });
  }
  return best;
}

std::vector<Loop> loop_arrangements(const Hypergraph& h, std::size_t n, LoopEquivalence eq) {
  std::vector<Loop> out;
  if (n < 3 || n > h.edge_count()) return out;
  LoopSearch search(h);
  for (std::size_t start = 0; start + n <= h.edge_count(); ++start) {
    search.run(
        start, [n] { return n; }, n,
        [&](const Loop& loop) {
          if (loop.size() != n || loop.edges[1] > loop.edges[n - 1]) return;
          out.push_back(loop);
          if (eq == LoopEquivalence::Rotation) {
            Loop rev;
            rev.edges.push_back(loop.edges[0]);
            for (std::size_t i = n - 1; i >= 1; --i) rev.edges.push_back(loop.edges[i]);
            rev.joints.assign(loop.joints.rbegin(), loop.joints.rend());
            out.push_back(std::move(rev));
          }
        });
  }
  return out;
}

EdgeClassification classify_edges(const Hypergraph& h, const Loop& loop) {
  EdgeClassification c;
  std::vector<char> on_loop(h.id_space(), 0);
  std::vector<char> is_polygon(h.edge_count(), 0);
  for (auto e : loop.edges) {
    is_polygon[e] = 1;
    for (auto v : h.edge(e)) on_loop[v] = 1;
  }
  for (auto v : h.vertices()) (on_loop[v] ? c.loop_vertices : c.free_vertices).push_back(v);
  c.polygon = loop.edges;
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    if (is_polygon[e]) continue;
    auto edge = h.edge(e);
    bool has_free = std::any_of(edge.begin(), edge.end(), [&](VertexId v) { return !on_loop[v]; });
    (has_free ? c.free : c.span).push_back(e);
  }
  return c;
}

std::string annotate_loop(const Hypergraph& h, const Loop& loop) {
  auto cls = classify_edges(h, loop);
  std::vector<char> on_loop(h.id_space(), 0);
  for (auto v : cls.loop_vertices) on_loop[v] = 1;

  std::string out;
  std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out.push_back(',');
    VertexId in = loop.joints[(i + n - 1) % n];
    VertexId outj = loop.joints[i];
    out += vertex_name(in);
    for (auto v : h.edge(loop.edges[i]))
      if (v != in && v != outj) out += vertex_name(v);
    out += vertex_name(outj);
  }
  out.push_back('.');

  std::vector<char> is_polygon(h.edge_count(), 0);
  for (auto e : loop.edges) is_polygon[e] = 1;
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    if (is_polygon[e]) continue;
    out.push_back(' ');
    for (auto v : h.edge(e)) {
      out += vertex_name(v);
      out.push_back(on_loop[v] ? '*' : '.');
    }
  }
  return out;
}

}  // namespace ks
