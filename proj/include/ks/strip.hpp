#pragma once

// Edge-removal subsets of a parent hypergraph.
//
// Exhaustive enumeration visits the removed-edge k-sets in colexicographic
// order: {c_0 < c_1 < ... < c_{k-1}} has rank sum_i C(c_i, i + 1). Windows
// [start, end) refer to these ranks, so disjoint windows split a run across
// machines with no overlap.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ks/mmp.hpp"
#include "ks/rng.hpp"

namespace ks {

using Rank = unsigned __int128;

/// Exact C(n, k) for n <= 120 (intermediates fit in 128 bits).
Rank choose128(unsigned n, unsigned k);

std::string rank_to_string(Rank r);
Rank parse_rank(std::string_view text);

enum class Selection { UniformSpacing, Randomized };

struct SamplerSeed {
  enum class Provenance { User, Entropy };
  std::uint64_t seed = 0;
  Provenance provenance = Provenance::User;

  static SamplerSeed user(std::uint64_t s) { return {s, Provenance::User}; }
  /// SHA-256 of wall-clock time, process id and CPU time, truncated to 64 bits.
  static SamplerSeed from_entropy();
};

struct StripPlan {
  unsigned k = 1;
  std::optional<Rank> start;
  std::optional<Rank> end;
  double increment = 1.0;
  Selection selection = Selection::UniformSpacing;
  SamplerSeed seed{};
  bool connected_only = false;
  bool renormalize_output = false;
};

/// Keeps every candidate when the increment is 1. Above 1, uniform mode
/// keeps candidate r whenever r reaches the next multiple of the increment
/// (a real accumulator, so non-integer increments work); randomized mode
/// keeps each candidate with probability 1/increment.
class Thinner {
 public:
  Thinner(double increment, Selection selection, SamplerSeed seed, std::uint64_t stream = 0);
  bool keep();

 private:
  double increment_;
  Selection selection_;
  double next_ = 0.0;
  std::uint64_t index_ = 0;
  SplitMix64 rng_;
};

using HypergraphSink = std::function<void(Hypergraph)>;

/// Sequence of removed-edge index sets in colex order, rank window applied.
class CombinationCursor {
 public:
  CombinationCursor(unsigned n, unsigned k, Rank start = 0);
  const std::vector<unsigned>& current() const { return combo_; }
  Rank rank() const { return rank_; }
  bool valid() const { return valid_; }
  void advance();

 private:
  unsigned n_;
  unsigned k_;
  std::vector<unsigned> combo_;
  Rank rank_ = 0;
  bool valid_ = true;
};

/// The hypergraph left after removing the listed edges (indices ascending).
Hypergraph remove_edges(const Hypergraph& h, const std::vector<unsigned>& removed);

/// Streams every C(n, k) removal subset in the plan's window through `sink`.
/// Throws std::invalid_argument for k > n or a bad window.
void enumerate_subsets(const Hypergraph& h, const StripPlan& plan, const HypergraphSink& sink);

std::vector<Hypergraph> enumerate_subsets(const Hypergraph& h, const StripPlan& plan);

/// Strips one edge at a time from each input. Thinning runs over the whole
/// candidate stream; exact duplicates (same renormalized line) are dropped.
/// Children are renormalized.
std::vector<Hypergraph> strip_one_each(const std::vector<Hypergraph>& inputs, const StripPlan& plan);

/// `count` independent uniform k-edge removals (with replacement across samples).
std::vector<Hypergraph> sample_subsets(const Hypergraph& h, unsigned k, std::size_t count, SamplerSeed seed);

}  // namespace ks
