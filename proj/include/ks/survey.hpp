#pragma once

// Stage-by-stage survey: strip one edge from every survivor, drop
// unconnected children, exact duplicates and isomorphic copies, keep the KS
// sets as the next stage's inputs and archive the critical ones.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ks/canon.hpp"
#include "ks/stats.hpp"
#include "ks/strip.hpp"

namespace ks {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Key-value text, one `key = value` per line, '#' comments:
///   start      cell600 | path to an MMP file (first line used)   [cell600]
///   output     directory for stage files                          (required)
///   edges_to   lowest edge count to reach                         (required)
///   target     survivors wanted per stage                         [50000]
///   increment  auto | number >= 1                                 [auto]
///   mode       random | uniform                                   [random]
///   seed       auto | unsigned 64-bit integer                     [auto]
///   workers    thread count                                       [1]
///   pilot      inputs used to calibrate the increment             [100]
///   criticals  yes | no: test KS survivors for criticality        [yes]
struct SurveyConfig {
  std::string start = "cell600";
  std::filesystem::path output;
  unsigned edges_to = 0;
  std::size_t target = 50000;
  std::optional<double> increment;  // empty: calibrate per stage
  Selection mode = Selection::Randomized;
  SamplerSeed seed = SamplerSeed::user(0);
  unsigned workers = 1;
  std::size_t pilot = 100;
  bool check_criticality = true;
};

/// Throws ConfigError naming the offending line.
SurveyConfig parse_survey_config(std::istream& in);

struct StageResult {
  unsigned edges = 0;
  std::size_t inputs = 0;
  double increment = 1.0;
  std::size_t children = 0;     // after thinning
  std::size_t connected = 0;
  std::size_t unique = 0;       // after exact dedupe
  std::size_t noniso = 0;       // after isomorphism dedupe
  std::size_t ks = 0;           // non-colorable survivors, next stage's inputs
  std::size_t criticals = 0;
  std::size_t criticals_odd = 0;
  std::size_t criticals_even = 0;
  bool exhaustive = false;      // every stage so far ran with increment 1
  double seconds = 0;
};

std::string stage_to_json(const StageResult& s);
StageResult stage_from_json(const std::string& text);

/// Survey statistics for the stage; class counts are exact only for
/// exhaustive stages, so the estimate is omitted otherwise.
SurveyRecord stage_to_record(const StageResult& s, int parent_edges);

/// Increment that brings `total_inputs` inputs to about `target` survivors,
/// using the survival rate of the first `pilot.size()` inputs through the
/// filter chain. Returns 1 (and sets *degenerate) when no pilot child survives.
double calibrate_increment(const std::vector<Hypergraph>& pilot, std::size_t total_inputs, std::size_t target,
                           bool* degenerate = nullptr);

struct CriticalFinding {
  Hypergraph hypergraph;  // renormalized
  CanonicalForm form;
  bool parity = false;
  std::size_t biggest_loop = 0;
  /// Vertex count outside 26..60 or edge count outside 13..41.
  bool unusual = false;
};

/// The critical members of `hs`, one per isomorphism class.
std::vector<CriticalFinding> find_criticals(const std::vector<Hypergraph>& hs, unsigned workers = 1);

/// Runs `fn(i)` for i in [0, n) on `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

struct StageOutput {
  StageResult result;
  std::vector<Hypergraph> survivors;  // non-isomorphic KS sets
  std::vector<Hypergraph> criticals;
};

/// One strip-and-filter stage; `edges` is the child edge count.
StageOutput run_stage(const std::vector<Hypergraph>& inputs, unsigned edges, double increment, Selection mode,
                      SamplerSeed seed, unsigned workers, bool check_criticality);

using StageCallback = std::function<void(const StageResult&, bool resumed)>;

/// Runs every stage from the start hypergraph down to cfg.edges_to, writing
/// edges-NN.mmp, edges-NN.criticals.mmp and edges-NN.json per stage plus
/// records.jsonl at the end. Stages whose files exist are loaded instead of
/// recomputed. Throws ConfigError for bad settings, std::runtime_error for
/// I/O or corrupt stage files.
std::vector<StageResult> run_survey(const SurveyConfig& cfg, const StageCallback& on_stage = {});

}  // namespace ks
