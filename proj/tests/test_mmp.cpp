#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ks/canon.hpp"
#include "ks/mmp.hpp"
#include "support.hpp"

using namespace ks;

TEST_CASE("vertex names follow the printed character list, then '+' prefixes") {
  CHECK(alphabet_size() == 90);
  CHECK(vertex_name(0) == "1");
  CHECK(vertex_name(8) == "9");
  CHECK(vertex_name(9) == "A");
  CHECK(vertex_name(35) == "a");
  CHECK(vertex_name(61) == "!");
  CHECK(vertex_name(89) == "~");
  CHECK(vertex_name(90) == "+1");
  CHECK(vertex_name(179) == "+~");
  CHECK(vertex_name(180) == "++1");
  std::string all;
  for (VertexId v = 0; v < 90; ++v) all += vertex_name(v);
  CHECK(all ==
        "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
        "!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~");
}

TEST_CASE("two disjoint edges") {
  auto h = parse_mmp("1234,5678.");
  CHECK(h.vertex_count() == 8);
  CHECK(h.edge_count() == 2);
  CHECK(h.edge(1)[0] == 4);
  CHECK(serialize_mmp(h) == "1234,5678.");
  CHECK_FALSE(is_connected(h));
}

TEST_CASE("38-19 parses and serializes byte for byte") {
  const auto& e = kstest::corpus_entry("38-19");
  auto h = parse_mmp(e.line);
  CHECK(h.vertex_count() == 38);
  CHECK(h.edge_count() == 19);
  CHECK(serialize_mmp(h) == e.line);
}

TEST_CASE("60-40 line with a doubled comma") {
  const auto& e = kstest::corpus_entry("60-40");
  REQUIRE(e.line.find(",,") != std::string::npos);
  // printed without its final '.'
  CHECK_THROWS_AS(parse_mmp(e.line), MmpError);
  try {
    parse_mmp(e.line + ".");
    FAIL("strict parse accepted an empty edge");
  } catch (const MmpError& err) {
    CHECK(std::string(err.what()).find("empty edge") != std::string::npos);
    CHECK(err.column() == e.line.find(",,") + 1);
  }
  auto h = parse_mmp(e.line, ParseOptions{true});
  CHECK(h.edge_count() == 40);
  CHECK(h.vertex_count() == 60);
}

TEST_CASE("strict grammar errors") {
  CHECK_THROWS_AS(parse_mmp("1234,5678"), MmpError);   // no terminator
  CHECK_THROWS_AS(parse_mmp("1234,,5678."), MmpError);
  CHECK_THROWS_AS(parse_mmp("12 34,5678."), MmpError);  // space is no vertex
  CHECK_THROWS_AS(parse_mmp("1231,5678."), MmpError);   // repeated vertex
  CHECK_THROWS_AS(parse_mmp("123+,5678."), MmpError);   // dangling prefix
  CHECK_THROWS_AS(parse_mmp("."), MmpError);
  CHECK_NOTHROW(parse_mmp("1234,5678", ParseOptions{true}));
}

TEST_CASE("100 vertices need '+' names and round-trip") {
  std::vector<std::vector<VertexId>> edges;
  for (VertexId v = 0; v < 100; v += 4) edges.push_back({v, v + 1, v + 2, v + 3});
  Hypergraph h(edges);
  auto line = serialize_mmp(h);
  CHECK(line.find("+1") != std::string::npos);
  CHECK(line.find("+3+4+5+6,") != std::string::npos);
  CHECK(parse_mmp(line) == h);
}

TEST_CASE("validation") {
  ParseOptions raw;
  raw.validate = false;
  SUBCASE("edge of two vertices") {
    auto r = validate_mmp(parse_mmp("12,345.", raw));
    REQUIRE(r.size() == 1);
    CHECK(r[0].condition == Condition::EdgeTooSmall);
    CHECK(r[0].first_edge == 0);
    CHECK_THROWS_AS(parse_mmp("12,345."), MmpError);
  }
  SUBCASE("4-edges sharing three vertices") {
    auto r = validate_mmp(parse_mmp("1234,1235.", raw));
    REQUIRE(r.size() == 1);
    CHECK(r[0].condition == Condition::IntersectionTooLarge);
    CHECK(r[0].first_edge == 0);
    CHECK(r[0].second_edge == 1);
  }
  SUBCASE("4-edges sharing two vertices are fine") { CHECK(validate_mmp(parse_mmp("1234,1256.", raw)).empty()); }
  SUBCASE("duplicate edge") {
    auto r = validate_mmp(parse_mmp("1234,4321.", raw));
    REQUIRE_FALSE(r.empty());
    CHECK(r[0].condition == Condition::DuplicateEdge);
  }
  SUBCASE("26-13 is valid") { CHECK(validate_mmp(kstest::derived_set("26-13")).empty()); }
}

TEST_CASE("condition (iii) against a direct reading on all small edge pairs") {
  // Two edges over 8 vertices, sizes 3..5: flagged iff they share k vertices
  // and one of them has fewer than k + 2.
  std::vector<std::vector<VertexId>> edges;
  for (unsigned m = 0; m < 256; ++m) {
    int bits = __builtin_popcount(m);
    if (bits < 3 || bits > 5) continue;
    std::vector<VertexId> e;
    for (VertexId v = 0; v < 8; ++v)
      if (m >> v & 1) e.push_back(v);
    edges.push_back(e);
  }
  ParseOptions raw;
  raw.validate = false;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      std::size_t k = 0;
      for (auto u : edges[i])
        for (auto v : edges[j]) k += u == v;
      bool expect_bad = edges[i].size() < k + 2 || edges[j].size() < k + 2;
      Hypergraph h({edges[i], edges[j]});
      auto r = validate_mmp(h);
      bool flagged = std::any_of(r.begin(), r.end(), [](const Violation& v) {
        return v.condition == Condition::IntersectionTooLarge;
      });
      CHECK(flagged == expect_bad);
      ++checked;
    }
  CHECK(checked > 10000);
}

TEST_CASE("renormalize") {
  auto h = parse_mmp("ABCD,DEFG.");
  auto r = renormalize(h);
  CHECK(serialize_mmp(r) == "1234,4567.");
  CHECK(renormalize(r) == r);

  const auto& cell = kstest::cell600().hypergraph;
  for (std::size_t e = 0; e < cell.edge_count(); ++e) CHECK(renormalize(cell.without_edge(e)).vertex_count() == 60);
  // Dropping all five bases through one ray orphans exactly that ray.
  VertexId ray = cell.edge(0)[0];
  std::vector<std::size_t> keep;
  for (std::size_t e = 0; e < cell.edge_count(); ++e) {
    auto s = cell.sorted_edge(e);
    if (!std::binary_search(s.begin(), s.end(), ray)) keep.push_back(e);
  }
  REQUIRE(keep.size() == 70);
  auto stripped = renormalize(cell.select_edges(keep));
  CHECK(stripped.vertex_count() == 59);
  CHECK(stripped.id_space() == 59);
}

TEST_CASE("renormalize keeps the isomorphism class") {
  std::mt19937_64 rng(11);
  const auto& cell = kstest::cell600().hypergraph;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> idx(cell.edge_count());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(20);
    auto h = cell.select_edges(idx);
    CHECK(canonical_form(h) == canonical_form(renormalize(h)));
  }
}

TEST_CASE("connectivity") {
  CHECK(is_connected(parse_mmp("1234,4567.")));
  CHECK(is_connected(parse_mmp("1234.")));
  CHECK_FALSE(is_connected(Hypergraph{}));

  // Pairs of 600-cell bases with no common ray, counted directly.
  const auto& cell = kstest::cell600().hypergraph;
  std::size_t disjoint = 0, unconnected = 0;
  for (std::size_t i = 0; i < cell.edge_count(); ++i)
    for (std::size_t j = i + 1; j < cell.edge_count(); ++j) {
      std::set<VertexId> a(cell.edge(i).begin(), cell.edge(i).end());
      bool meet = std::any_of(cell.edge(j).begin(), cell.edge(j).end(), [&](VertexId v) { return a.count(v) > 0; });
      disjoint += !meet;
      std::size_t pair[] = {i, j};
      unconnected += !is_connected(cell.select_edges(pair));
    }
  CHECK(disjoint == 2175);
  CHECK(unconnected == 2175);
}

TEST_CASE("connectivity is invariant under relabeling") {
  std::mt19937_64 rng(5);
  const auto& cell = kstest::cell600().hypergraph;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> idx(cell.edge_count());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(3 + trial % 6);
    auto h = cell.select_edges(idx);
    std::vector<VertexId> perm(h.id_space());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(is_connected(h) == is_connected(relabel(h, perm)));
  }
}

TEST_CASE("corpus lines match their advertised signatures") {
  auto corpus = kstest::load_corpus();
  CHECK(corpus.size() >= 30);
  for (const auto& e : corpus) {
    CAPTURE(e.signature);
    auto h = parse_mmp(e.line, ParseOptions{true});
    CHECK(h.vertex_count() == e.vertices);
    CHECK(h.edge_count() == e.edges);
    CHECK(validate_mmp(h).empty());
    if (e.signature != "60-40") CHECK_NOTHROW(parse_mmp(e.line));
  }
}

TEST_CASE("round-trip fuzz") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t ids = 8 + rng() % 250;
    std::vector<std::vector<VertexId>> edges;
    std::size_t m = 1 + rng() % 12;
    for (std::size_t i = 0; i < m; ++i) {
      std::set<VertexId> e;
      std::size_t size = 3 + rng() % 4;
      while (e.size() < size) e.insert(static_cast<VertexId>(rng() % ids));
      std::vector<VertexId> v(e.begin(), e.end());
      std::shuffle(v.begin(), v.end(), rng);
      edges.push_back(v);
    }
    Hypergraph h(edges);
    if (!validate_mmp(h).empty()) continue;
    auto line = serialize_mmp(h);
    CHECK(parse_mmp(line) == h);
  }
  // Random grammatical text: whatever parses must serialize to a line that parses to the same thing.
  const std::string chars = "123456789ABCabc+,,,";
  std::size_t parsed = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::string line;
    std::size_t len = 3 + rng() % 20;
    for (std::size_t i = 0; i < len; ++i) line.push_back(chars[rng() % chars.size()]);
    line.push_back('.');
    try {
      auto h = parse_mmp(line);
      ++parsed;
      CHECK(parse_mmp(serialize_mmp(h)) == h);
    } catch (const MmpError&) {
    }
  }
  CHECK(parsed > 0);
}
