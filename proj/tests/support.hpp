#pragma once

// Shared fixtures and slow reference implementations for the test suites.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ks/coloring.hpp"
#include "ks/geometry.hpp"
#include "ks/mmp.hpp"

#ifndef KS_DATA_DIR
#error "KS_DATA_DIR must point at the data directory"
#endif

namespace kstest {

using ks::Hypergraph;
using ks::VertexId;

inline std::string data_path(const std::string& name) { return std::string(KS_DATA_DIR) + "/" + name; }

struct CorpusEntry {
  std::string signature;  // "V-E"
  std::size_t vertices = 0;
  std::size_t edges = 0;
  int biggest_loop = -1;  // -1 when not printed
  std::string line;
};

inline std::vector<CorpusEntry> load_corpus() {
  std::ifstream in(data_path("critical_corpus.tsv"));
  if (!in) throw std::runtime_error("missing critical_corpus.tsv");
  std::vector<CorpusEntry> out;
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty() || row[0] == '#') continue;
    std::istringstream ss(row);
    CorpusEntry e;
    std::string loop;
    std::getline(ss, e.signature, '\t');
    std::getline(ss, loop, '\t');
    std::getline(ss, e.line);
    auto dash = e.signature.find('-');
    e.vertices = std::stoul(e.signature.substr(0, dash));
    e.edges = std::stoul(e.signature.substr(dash + 1));
    e.biggest_loop = loop == "-" ? -1 : std::stoi(loop);
    out.push_back(e);
  }
  return out;
}

inline const CorpusEntry& corpus_entry(const std::string& signature) {
  static const auto corpus = load_corpus();
  for (const auto& e : corpus)
    if (e.signature == signature) return e;
  throw std::runtime_error("no corpus entry " + signature);
}

inline Hypergraph corpus_hypergraph(const std::string& signature) {
  return ks::parse_mmp(corpus_entry(signature).line, ks::ParseOptions{true});
}

inline const ks::RaySet600& cell600() {
  static const ks::RaySet600 set = ks::build_600cell();
  return set;
}

/// Exhaustive 0/1 search over every assignment of the used vertices.
inline bool brute_force_colorable(const Hypergraph& h) {
  auto verts = h.vertices();
  if (verts.size() > 24) throw std::logic_error("brute force limited to 24 vertices");
  std::vector<int> pos(h.id_space(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
  std::vector<std::uint32_t> masks;
  for (const auto& e : h.edges()) {
    std::uint32_t m = 0;
    for (auto v : e) m |= 1u << pos[v];
    masks.push_back(m);
  }
  for (std::uint32_t a = 0; a < (1u << verts.size()); ++a) {
    bool ok = true;
    for (auto m : masks)
      if (__builtin_popcount(a & m) != 1) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

/// Smallest sorted-edge serialization over every vertex permutation.
inline std::string permutation_canonical(const Hypergraph& h) {
  auto verts = h.vertices();
  std::vector<VertexId> perm(verts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  std::vector<VertexId> map(h.id_space());
  do {
    for (std::size_t i = 0; i < verts.size(); ++i) map[verts[i]] = perm[i];
    std::vector<std::vector<VertexId>> edges;
    for (const auto& e : h.edges()) {
      std::vector<VertexId> r;
      for (auto v : e) r.push_back(map[v]);
      std::sort(r.begin(), r.end());
      edges.push_back(r);
    }
    std::sort(edges.begin(), edges.end());
    std::string s;
    for (const auto& e : edges) {
      for (auto v : e) s.push_back(static_cast<char>('a' + v));
      s.push_back(',');
    }
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Every MMP-valid hypergraph whose edges are distinct triples over
/// vertices 0..5, with 1..max_edges edges. Triples sharing two vertices
/// break condition (iii) and never appear together.
inline std::vector<Hypergraph> small_triple_family(std::size_t max_edges) {
  std::vector<std::vector<VertexId>> triples;
  for (VertexId a = 0; a < 6; ++a)
    for (VertexId b = a + 1; b < 6; ++b)
      for (VertexId c = b + 1; c < 6; ++c) triples.push_back({a, b, c});
  auto clash = [&](std::size_t i, std::size_t j) {
    int shared = 0;
    for (auto u : triples[i])
      for (auto v : triples[j]) shared += u == v;
    return shared >= 2;
  };
  std::vector<Hypergraph> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (!chosen.empty()) {
      std::vector<std::vector<VertexId>> edges;
      for (auto i : chosen) edges.push_back(triples[i]);
      out.emplace_back(std::move(edges));
    }
    if (chosen.size() == max_edges) return;
    for (std::size_t i = next; i < triples.size(); ++i) {
      bool ok = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t j) { return clash(i, j); });
      if (!ok) continue;
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Edge subsets of `h` with exactly `edge_count` edges in which every covered
/// vertex has degree exactly 2, containing edge `first`. Calls `found` for
/// each (sorted index list) until it returns false.
inline void even_cover_subsets(const Hypergraph& h, std::size_t edge_count, std::size_t first,
                               const std::function<bool(const std::vector<std::size_t>&)>& found) {
  std::vector<std::vector<std::size_t>> incident(h.id_space());
  for (std::size_t e = 0; e < h.edge_count(); ++e)
    for (auto v : h.edge(e)) incident[v].push_back(e);
  std::vector<int> degree(h.id_space(), 0);
  std::vector<char> used(h.edge_count(), 0);
  std::vector<std::size_t> chosen;
  std::set<std::vector<std::size_t>> reported;
  bool stop = false;
  auto fits = [&](std::size_t e) {
    for (auto v : h.edge(e))
      if (degree[v] >= 2) return false;
    return true;
  };
  auto add = [&](std::size_t e, int d) {
    used[e] = d > 0;
    for (auto v : h.edge(e)) degree[v] += d;
  };
  std::function<void()> rec = [&] {
    if (stop) return;
    VertexId open = 0;
    bool any = false;
    for (VertexId v = 0; v < degree.size(); ++v)
      if (degree[v] == 1) {
        open = v;
        any = true;
        break;
      }
    if (!any) {
      if (chosen.size() == edge_count) {
        auto key = chosen;
        std::sort(key.begin(), key.end());
        if (reported.insert(key).second && !found(key)) stop = true;
      }
      return;
    }
    if (chosen.size() == edge_count) return;
    for (auto e : incident[open]) {
      if (used[e] || !fits(e)) continue;
      chosen.push_back(e);
      add(e, 1);
      rec();
      add(e, -1);
      chosen.pop_back();
      if (stop) return;
    }
  };
  chosen.push_back(first);
  add(first, 1);
  rec();
}

}  // namespace kstest

namespace kstest {

/// Fixtures from data/derived_sets.tsv (see the header of that file).
inline ks::Hypergraph derived_set(const std::string& signature) {
  std::ifstream in(data_path("derived_sets.tsv"));
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty() || row[0] == '#') continue;
    auto tab = row.find('\t');
    if (row.substr(0, tab) == signature) return ks::parse_mmp(row.substr(tab + 1));
  }
  throw std::runtime_error("no derived set " + signature);
}

/// Edges are the vertices of K_n, vertices are its edges: every two edges
/// share exactly one vertex and every vertex has degree 2.
inline ks::Hypergraph complete_graph_dual(unsigned n) {
  std::vector<std::vector<VertexId>> edges(n);
  VertexId id = 0;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = a + 1; b < n; ++b, ++id) {
      edges[a].push_back(id);
      edges[b].push_back(id);
    }
  return ks::Hypergraph(edges);
}

}  // namespace kstest
