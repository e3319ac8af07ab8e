#include "ks/mmp.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>

namespace ks {

namespace {

constexpr std::string_view kAlphabet =
    "123456789"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
    "!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~";

constexpr std::array<int, 128> make_reverse_table() {
  std::array<int, 128> table{};
  for (auto& t : table) t = -1;
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
  return table;
}

constexpr auto kReverse = make_reverse_table();

int alphabet_index(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < kReverse.size() ? kReverse[u] : -1;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::size_t alphabet_size() { return kAlphabet.size(); }

std::string vertex_name(VertexId id) {
  std::string name(id / kAlphabet.size(), '+');
  name.push_back(kAlphabet[id % kAlphabet.size()]);
  return name;
}

Hypergraph::Hypergraph(std::vector<std::vector<VertexId>> edges, std::string label)
    : edges_(std::move(edges)), label_(std::move(label)) {
  sorted_.reserve(edges_.size());
  std::vector<VertexId> all;
  for (const auto& e : edges_) {
    auto s = e;
    std::sort(s.begin(), s.end());
    all.insert(all.end(), s.begin(), s.end());
    sorted_.push_back(std::move(s));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  vertex_count_ = all.size();
  id_space_ = all.empty() ? 0 : all.back() + 1;
}

std::vector<VertexId> Hypergraph::vertices() const {
  std::vector<VertexId> out;
  auto deg = degrees();
  for (std::size_t v = 0; v < deg.size(); ++v)
    if (deg[v] > 0) out.push_back(static_cast<VertexId>(v));
  return out;
}

std::vector<std::size_t> Hypergraph::degrees() const {
  std::vector<std::size_t> deg(id_space_, 0);
  for (const auto& e : edges_)
    for (auto v : e) ++deg[v];
  return deg;
}

Hypergraph Hypergraph::without_edge(std::size_t index) const {
  auto copy = edges_;
  copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(index));
  return Hypergraph(std::move(copy), label_);
}

Hypergraph Hypergraph::select_edges(std::span<const std::size_t> indices) const {
  std::vector<std::vector<VertexId>> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(edges_.at(i));
  return Hypergraph(std::move(picked), label_);
}

Hypergraph parse_mmp(std::string_view line, ParseOptions opts) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) line.remove_suffix(1);
  if (line.empty()) throw MmpError("empty line", 0);

  bool terminated = line.back() == '.';
  if (terminated) {
    line.remove_suffix(1);
  } else if (!opts.lenient) {
    throw MmpError("missing terminating '.'", line.size());
  }

  std::vector<std::vector<VertexId>> edges;
  std::vector<VertexId> current;
  std::size_t prefix = 0;

  auto close_edge = [&](std::size_t column) {
    if (prefix != 0) throw MmpError("dangling '+' prefix", column);
    if (current.empty()) {
      if (!opts.lenient) throw MmpError("empty edge", column);
      return;
    }
    edges.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t col = 0; col < line.size(); ++col) {
    char c = line[col];
    if (c == ',') {
      close_edge(col);
      continue;
    }
    if (c == '+') {
      ++prefix;
      continue;
    }
    int idx = alphabet_index(c);
    if (idx < 0) throw MmpError(std::string("invalid vertex character '") + c + "'", col);
    auto id = static_cast<VertexId>(prefix * kAlphabet.size() + static_cast<std::size_t>(idx));
    prefix = 0;
    if (std::find(current.begin(), current.end(), id) != current.end())
      throw MmpError("vertex '" + vertex_name(id) + "' repeated in edge", col);
    current.push_back(id);
  }
  close_edge(line.size());
  if (edges.empty()) throw MmpError("no edges", 0);

  Hypergraph h(std::move(edges));
  if (!opts.validate) return h;
  auto report = validate_mmp(h);
  if (!report.empty()) throw MmpError("invalid MMP hypergraph: " + report.front().message, 0);
  return h;
}

std::vector<Hypergraph> parse_mmp_lines(std::istream& in, ParseOptions opts) {
  std::vector<Hypergraph> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_mmp(line, opts));
    } catch (const MmpError& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string serialize_mmp(const Hypergraph& h) {
  std::string out;
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    if (i) out.push_back(',');
    for (auto v : h.edge(i)) out += vertex_name(v);
  }
  out.push_back('.');
  return out;
}

ValidationReport validate_mmp(const Hypergraph& h) {
  ValidationReport report;
  auto edge_text = [&](std::size_t i) {
    std::string s;
    for (auto v : h.edge(i)) s += vertex_name(v);
    return s;
  };

  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.sorted_edge(i);
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      report.push_back({Condition::RepeatedVertex, i, i, "edge " + edge_text(i) + " repeats a vertex"});
    if (e.size() < 3)
      report.push_back({Condition::EdgeTooSmall, i, i, "edge " + edge_text(i) + " has fewer than 3 vertices"});
  }

  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto a = h.sorted_edge(i);
    for (std::size_t j = i + 1; j < h.edge_count(); ++j) {
      auto b = h.sorted_edge(j);
      if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
        report.push_back({Condition::DuplicateEdge, i, j, "edges " + edge_text(i) + " and " + edge_text(j) + " are identical"});
        continue;
      }
      std::size_t shared = 0;
      for (std::size_t x = 0, y = 0; x < a.size() && y < b.size();) {
        if (a[x] == b[y]) {
          ++shared;
          ++x;
          ++y;
        } else if (a[x] < b[y]) {
          ++x;
        } else {
          ++y;
        }
      }
      if (shared > 0 && std::min(a.size(), b.size()) < shared + 2)
        report.push_back({Condition::IntersectionTooLarge, i, j,
                          "edges " + edge_text(i) + " and " + edge_text(j) + " share " + std::to_string(shared) +
                              " vertices but one has fewer than " + std::to_string(shared + 2)});
    }
  }
  return report;
}

Hypergraph renormalize(const Hypergraph& h) {
  std::vector<VertexId> rename(h.id_space(), ~VertexId{0});
  VertexId next = 0;
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(h.edge_count());
  for (const auto& e : h.edges()) {
    std::vector<VertexId> mapped;
    mapped.reserve(e.size());
    for (auto v : e) {
      if (rename[v] == ~VertexId{0}) rename[v] = next++;
      mapped.push_back(rename[v]);
    }
    edges.push_back(std::move(mapped));
  }
  return Hypergraph(std::move(edges), h.label());
}

bool is_connected(const Hypergraph& h) {
  if (h.edge_count() == 0) return false;
  DisjointSets sets(h.edge_count());
  std::vector<std::size_t> first_edge(h.id_space(), h.edge_count());
  std::size_t components = h.edge_count();
  for (std::size_t i = 0; i < h.edge_count(); ++i)
    for (auto v : h.edge(i)) {
      if (first_edge[v] == h.edge_count())
        first_edge[v] = i;
      else if (sets.unite(first_edge[v], i))
        --components;
    }
  return components == 1;
}

}  // namespace ks
