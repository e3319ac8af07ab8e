#include "ks/strip.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ks {

Rank choose128(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (n > 120) throw std::out_of_range("choose128 supports n <= 120");
  k = std::min(k, n - k);
  Rank r = 1;
  // r * (n - i) / (i + 1) stays exact because r * (n - i) is divisible by (i + 1).
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::string rank_to_string(Rank r) {
  if (r == 0) return "0";
  std::string s;
  while (r > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(r % 10)));
    r /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Rank parse_rank(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rank");
  Rank r = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad rank '" + std::string(text) + "'");
    r = r * 10 + static_cast<unsigned>(c - '0');
  }
  return r;
}

Thinner::Thinner(double increment, Selection selection, SamplerSeed seed, std::uint64_t stream)
    : increment_(increment), selection_(selection), rng_(seed.seed, stream) {
  if (!(increment >= 1.0)) throw std::invalid_argument("increment must be >= 1");
}

bool Thinner::keep() {
  auto r = static_cast<double>(index_++);
  if (increment_ == 1.0) return true;
  if (selection_ == Selection::Randomized) return rng_.uniform01() * increment_ < 1.0;
  if (r >= next_) {
    next_ += increment_;
    return true;
  }
  return false;
}

CombinationCursor::CombinationCursor(unsigned n, unsigned k, Rank start) : n_(n), k_(k), combo_(k) {
  if (k > n) throw std::invalid_argument("cannot remove " + std::to_string(k) + " of " + std::to_string(n) + " edges");
  if (start >= choose128(n, k)) {
    valid_ = false;
    return;
  }
  rank_ = start;
  Rank rest = start;
  unsigned hi = n;
  for (unsigned i = k; i-- > 0;) {
    unsigned c = i;
    // largest c < hi with C(c, i + 1) <= rest
    unsigned lo = i;
    unsigned up = hi - 1;
    while (lo < up) {
      unsigned mid = lo + (up - lo + 1) / 2;
      if (choose128(mid, i + 1) <= rest)
        lo = mid;
      else
        up = mid - 1;
    }
    c = lo;
    combo_[i] = c;
    rest -= choose128(c, i + 1);
    hi = c;
  }
}

void CombinationCursor::advance() {
  if (!valid_) return;
  ++rank_;
  for (unsigned i = 0; i < k_; ++i) {
    unsigned limit = (i + 1 < k_) ? combo_[i + 1] : n_;
    if (combo_[i] + 1 < limit) {
      ++combo_[i];
      for (unsigned j = 0; j < i; ++j) combo_[j] = j;
      return;
    }
  }
  valid_ = false;
}

Hypergraph remove_edges(const Hypergraph& h, const std::vector<unsigned>& removed) {
  std::vector<std::vector<VertexId>> kept;
  kept.reserve(h.edge_count() - removed.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    if (r < removed.size() && removed[r] == i) {
      ++r;
      continue;
    }
    kept.push_back(h.edges()[i]);
  }
  return Hypergraph(std::move(kept), h.label());
}

void enumerate_subsets(const Hypergraph& h, const StripPlan& plan, const HypergraphSink& sink) {
  auto n = static_cast<unsigned>(h.edge_count());
  if (plan.k > n) throw std::invalid_argument("k exceeds edge count");
  Rank total = choose128(n, plan.k);
  Rank start = plan.start.value_or(0);
  Rank end = plan.end.value_or(total);
  if (start > end || end > total)
    throw std::invalid_argument("window [" + rank_to_string(start) + ", " + rank_to_string(end) + ") outside [0, " +
                                rank_to_string(total) + ")");

  Thinner thin(plan.increment, plan.selection, plan.seed);
  for (CombinationCursor cur(n, plan.k, start); cur.valid() && cur.rank() < end; cur.advance()) {
    if (!thin.keep()) continue;
    auto sub = remove_edges(h, cur.current());
    if (plan.connected_only && !is_connected(sub)) continue;
    sink(plan.renormalize_output ? renormalize(sub) : std::move(sub));
  }
}

std::vector<Hypergraph> enumerate_subsets(const Hypergraph& h, const StripPlan& plan) {
  std::vector<Hypergraph> out;
  enumerate_subsets(h, plan, [&](Hypergraph g) { out.push_back(std::move(g)); });
  return out;
}

std::vector<Hypergraph> strip_one_each(const std::vector<Hypergraph>& inputs, const StripPlan& plan) {
  Thinner thin(plan.increment, plan.selection, plan.seed);
  std::unordered_set<std::string> seen;
  std::vector<Hypergraph> out;
  for (const auto& h : inputs) {
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      if (!thin.keep()) continue;
      auto child = renormalize(h.without_edge(e));
      if (plan.connected_only && !is_connected(child)) continue;
      if (!seen.insert(serialize_mmp(child)).second) continue;
      out.push_back(std::move(child));
    }
  }
  return out;
}

std::vector<Hypergraph> sample_subsets(const Hypergraph& h, unsigned k, std::size_t count, SamplerSeed seed) {
  auto n = static_cast<unsigned>(h.edge_count());
  if (k > n) throw std::invalid_argument("k exceeds edge count");
  SplitMix64 rng(seed.seed);
  std::vector<Hypergraph> out;
  out.reserve(count);
  std::vector<unsigned> removed;
  std::vector<char> taken(n);
  for (std::size_t s = 0; s < count; ++s) {
    // Floyd's algorithm: a uniform k-subset from k draws.
    std::fill(taken.begin(), taken.end(), 0);
    removed.clear();
    for (unsigned j = n - k; j < n; ++j) {
      auto t = static_cast<unsigned>(rng.below(j + 1));
      unsigned pick = taken[t] ? j : t;
      taken[pick] = 1;
      removed.push_back(pick);
    }
    std::sort(removed.begin(), removed.end());
    out.push_back(remove_edges(h, removed));
  }
  return out;
}

}  // namespace ks
