#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "ks/strip.hpp"
#include "support.hpp"

using namespace ks;

namespace {

// Pascal's triangle in plain 64-bit arithmetic, independent of choose128.
std::uint64_t pascal(unsigned n, unsigned k) {
  std::vector<std::vector<std::uint64_t>> t(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    t[i].assign(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return k > n ? 0 : t[n][k];
}

// All k-subsets of {0..n-1}, sorted by colex order (compare largest element first).
std::vector<std::vector<unsigned>> colex_subsets(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (static_cast<unsigned>(__builtin_popcount(m)) != k) continue;
    std::vector<unsigned> s;
    for (unsigned i = 0; i < n; ++i)
      if (m >> i & 1) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

Hypergraph chain(unsigned edges) {
  // 1234,4567,7589,... each edge shares one vertex with the next
  std::vector<std::vector<VertexId>> e;
  for (unsigned i = 0; i < edges; ++i) e.push_back({3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3});
  return Hypergraph(e);
}

}  // namespace

TEST_CASE("choose128 agrees with Pascal's triangle") {
  for (unsigned n = 0; n <= 60; ++n)
    for (unsigned k = 0; k <= n; ++k) CHECK(choose128(n, k) == pascal(n, k));
  CHECK(choose128(5, 7) == 0);
  CHECK(rank_to_string(choose128(120, 60)) == "96614908840363322603893139521372656");
  CHECK(rank_to_string(choose128(75, 40)) == "2942618815403661578310");
}

TEST_CASE("rank text round-trip") {
  for (Rank r : {Rank(0), Rank(7), choose128(75, 35), choose128(120, 60) - 1}) CHECK(parse_rank(rank_to_string(r)) == r);
  CHECK_THROWS_AS(parse_rank(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rank("12x"), std::invalid_argument);
}

TEST_CASE("cursor walks colex order, from any start rank") {
  for (unsigned n = 1; n <= 10; ++n)
    for (unsigned k = 0; k <= n; ++k) {
      auto ref = colex_subsets(n, k);
      REQUIRE(ref.size() == pascal(n, k));
      CombinationCursor c(n, k);
      std::size_t i = 0;
      for (; c.valid(); c.advance(), ++i) {
        REQUIRE(i < ref.size());
        CHECK(c.current() == ref[i]);
        CHECK(c.rank() == i);
      }
      CHECK(i == ref.size());
      for (std::size_t s = 0; s < ref.size(); s += 3) {
        CombinationCursor d(n, k, s);
        CHECK(d.current() == ref[s]);
      }
      CHECK_FALSE(CombinationCursor(n, k, ref.size()).valid());
    }
  CHECK_THROWS_AS(CombinationCursor(3, 4), std::invalid_argument);
}

TEST_CASE("removal subsets of the 600-cell") {
  const auto& cell = kstest::cell600().hypergraph;
  StripPlan plan;
  plan.k = 2;
  auto all = enumerate_subsets(cell, plan);
  CHECK(all.size() == 2775);
  // Subset r removes the r-th colex pair.
  auto pairs = colex_subsets(8, 2);
  for (std::size_t r = 0; r < pairs.size(); ++r) CHECK(all[r] == remove_edges(cell, pairs[r]));
  for (const auto& h : all) CHECK(h.edge_count() == 73);

  plan.k = 0;
  auto none = enumerate_subsets(cell, plan);
  REQUIRE(none.size() == 1);
  CHECK(none[0] == cell);

  plan.k = 76;
  CHECK_THROWS_AS(enumerate_subsets(cell, plan), std::invalid_argument);
}

TEST_CASE("disjoint windows cover the run exactly once") {
  const auto& cell = kstest::cell600().hypergraph;
  StripPlan plan;
  plan.k = 2;
  auto whole = enumerate_subsets(cell, plan);
  std::vector<Hypergraph> pieces;
  Rank cuts[] = {0, 1, 500, 501, 1999, 2775};
  for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
    plan.start = cuts[i];
    plan.end = cuts[i + 1];
    auto part = enumerate_subsets(cell, plan);
    CHECK(part.size() == static_cast<std::size_t>(cuts[i + 1] - cuts[i]));
    pieces.insert(pieces.end(), part.begin(), part.end());
  }
  CHECK(pieces == whole);

  plan.start = 10;
  plan.end = 5;
  CHECK_THROWS_AS(enumerate_subsets(cell, plan), std::invalid_argument);
  plan.start = 0;
  plan.end = 2776;
  CHECK_THROWS_AS(enumerate_subsets(cell, plan), std::invalid_argument);
}

TEST_CASE("connected-only and renormalized output") {
  auto h = chain(6);
  StripPlan plan;
  plan.k = 1;
  plan.connected_only = true;
  // only the two end edges leave a connected chain
  auto kept = enumerate_subsets(h, plan);
  CHECK(kept.size() == 2);
  plan.renormalize_output = true;
  for (const auto& g : enumerate_subsets(h, plan)) {
    CHECK(g.id_space() == g.vertex_count());
    CHECK(g.vertex_count() == 16);
  }
}

TEST_CASE("uniform thinning keeps every increment-th candidate") {
  for (double inc : {1.0, 2.0, 3.0, 2.5, 7.3}) {
    Thinner t(inc, Selection::UniformSpacing, SamplerSeed::user(0));
    std::vector<int> kept;
    for (int i = 0; i < 100; ++i)
      if (t.keep()) kept.push_back(i);
    CAPTURE(inc);
    CHECK(kept.size() == static_cast<std::size_t>(std::ceil(100 / inc)));
    for (std::size_t j = 0; j < kept.size(); ++j) CHECK(kept[j] == static_cast<int>(std::ceil(j * inc)));
  }
  CHECK_THROWS_AS(Thinner(0.5, Selection::UniformSpacing, SamplerSeed::user(0)), std::invalid_argument);
}

TEST_CASE("randomized thinning keeps about 1/increment and is reproducible") {
  const int n = 200000;
  const double inc = 4.0;
  Thinner a(inc, Selection::Randomized, SamplerSeed::user(42));
  Thinner b(inc, Selection::Randomized, SamplerSeed::user(42));
  Thinner c(inc, Selection::Randomized, SamplerSeed::user(43));
  int kept = 0, same = 0;
  for (int i = 0; i < n; ++i) {
    bool ka = a.keep();
    kept += ka;
    same += ka == b.keep();
    c.keep();
  }
  CHECK(same == n);
  double p = 1 / inc;
  double sd = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(kept - n * p) < 5 * sd);
}

TEST_CASE("streams of one seed differ") {
  SplitMix64 a(7, 0), b(7, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next() == b.next();
  CHECK(equal == 0);
  // Reference values for seed 0 (published SplitMix64 test vector).
  SplitMix64 z(0);
  CHECK(z.next() == 0xE220A8397B1DCDAFULL);
  CHECK(z.next() == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("entropy seeds differ between calls") {
  auto s1 = SamplerSeed::from_entropy();
  auto s2 = SamplerSeed::from_entropy();
  CHECK(s1.provenance == SamplerSeed::Provenance::Entropy);
  CHECK(s1.seed != s2.seed);
}

TEST_CASE("strip_one_each drops exact duplicates") {
  // Two copies of one parent contribute each child once.
  auto h = chain(4);
  StripPlan plan;
  auto kids = strip_one_each({h, h}, plan);
  CHECK(kids.size() == 3);  // removing either end gives the same renormalized line
  std::set<std::string> lines;
  for (const auto& k : kids) lines.insert(serialize_mmp(k));
  CHECK(lines.size() == kids.size());

  plan.connected_only = true;
  CHECK(strip_one_each({h}, plan).size() == 1);
}

TEST_CASE("uniform samples hit every removal pair about equally") {
  auto h = chain(6);
  auto samples = sample_subsets(h, 2, 30000, SamplerSeed::user(9));
  std::map<std::string, int> hits;
  for (const auto& s : samples) {
    CHECK(s.edge_count() == 4);
    ++hits[serialize_mmp(s)];
  }
  CHECK(hits.size() == 15);
  double expect = 30000.0 / 15;
  double chi2 = 0;
  for (auto& [line, n] : hits) chi2 += (n - expect) * (n - expect) / expect;
  CHECK(chi2 < 36.1);  // chi-square, 14 degrees of freedom, p = 0.001
  CHECK(sample_subsets(h, 2, 50, SamplerSeed::user(9)) ==
        std::vector<Hypergraph>(samples.begin(), samples.begin() + 50));
}
