#include "ks/survey.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "ks/coloring.hpp"
#include "ks/geometry.hpp"
#include "ks/loops.hpp"

namespace ks {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, std::size_t lineno) {
  std::istringstream ss(value);
  T v{};
  if (!(ss >> v) || !ss.eof())
    throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "' expects a number, got '" + value + "'");
  return v;
}

}  // namespace

SurveyConfig parse_survey_config(std::istream& in) {
  SurveyConfig cfg;
  bool have_output = false, have_edges_to = false;
  std::string line;
  std::size_t lineno = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "' given twice");
    auto bad = [&](const std::string& why) {
      return ConfigError("line " + std::to_string(lineno) + ": '" + key + "' " + why);
    };
    if (key == "start") {
      if (value.empty()) throw bad("is empty");
      cfg.start = value;
    } else if (key == "output") {
      if (value.empty()) throw bad("is empty");
      cfg.output = value;
      have_output = true;
    } else if (key == "edges_to") {
      long v = parse_number<long>(key, value, lineno);
      if (v < 0 || v > 75) throw bad("must lie in 0..75");
      cfg.edges_to = static_cast<unsigned>(v);
      have_edges_to = true;
    } else if (key == "target") {
      long v = parse_number<long>(key, value, lineno);
      if (v < 1) throw bad("must be at least 1");
      cfg.target = static_cast<std::size_t>(v);
    } else if (key == "increment") {
      if (value == "auto") {
        cfg.increment.reset();
      } else {
        double v = parse_number<double>(key, value, lineno);
        if (!(v >= 1.0)) throw bad("must be >= 1");
        cfg.increment = v;
      }
    } else if (key == "mode") {
      if (value == "random")
        cfg.mode = Selection::Randomized;
      else if (value == "uniform")
        cfg.mode = Selection::UniformSpacing;
      else
        throw bad("must be random or uniform");
    } else if (key == "seed") {
      if (value == "auto")
        cfg.seed = SamplerSeed::from_entropy();
      else
        cfg.seed = SamplerSeed::user(parse_number<std::uint64_t>(key, value, lineno));
    } else if (key == "workers") {
      long v = parse_number<long>(key, value, lineno);
      if (v < 1 || v > 1024) throw bad("must lie in 1..1024");
      cfg.workers = static_cast<unsigned>(v);
    } else if (key == "pilot") {
      long v = parse_number<long>(key, value, lineno);
      if (v < 1) throw bad("must be at least 1");
      cfg.pilot = static_cast<std::size_t>(v);
    } else if (key == "criticals") {
      if (value == "yes")
        cfg.check_criticality = true;
      else if (value == "no")
        cfg.check_criticality = false;
      else
        throw bad("must be yes or no");
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_output) throw ConfigError("missing 'output'");
  if (!have_edges_to) throw ConfigError("missing 'edges_to'");
  if (!seen.count("seed")) cfg.seed = SamplerSeed::from_entropy();
  return cfg;
}

std::string stage_to_json(const StageResult& s) {
  nlohmann::json j;
  j["edges"] = s.edges;
  j["inputs"] = s.inputs;
  j["increment"] = s.increment;
  j["children"] = s.children;
  j["connected"] = s.connected;
  j["unique"] = s.unique;
  j["noniso"] = s.noniso;
  j["ks"] = s.ks;
  j["criticals"] = s.criticals;
  j["criticals_odd"] = s.criticals_odd;
  j["criticals_even"] = s.criticals_even;
  j["exhaustive"] = s.exhaustive;
  j["seconds"] = s.seconds;
  return j.dump();
}

StageResult stage_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    StageResult s;
    s.edges = j.at("edges").get<unsigned>();
    s.inputs = j.at("inputs").get<std::size_t>();
    s.increment = j.at("increment").get<double>();
    s.children = j.at("children").get<std::size_t>();
    s.connected = j.at("connected").get<std::size_t>();
    s.unique = j.at("unique").get<std::size_t>();
    s.noniso = j.at("noniso").get<std::size_t>();
    s.ks = j.at("ks").get<std::size_t>();
    s.criticals = j.at("criticals").get<std::size_t>();
    s.criticals_odd = j.at("criticals_odd").get<std::size_t>();
    s.criticals_even = j.at("criticals_even").get<std::size_t>();
    s.exhaustive = j.at("exhaustive").get<bool>();
    s.seconds = j.at("seconds").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt stage record: ") + e.what());
  }
}

SurveyRecord stage_to_record(const StageResult& s, int parent_edges) {
  SurveyRecord r;
  r.edges = static_cast<int>(s.edges);
  r.parent_edges = parent_edges;
  if (s.exhaustive) r.noniso_estimate = BigCount(static_cast<unsigned long>(s.noniso));
  r.ks_samples = BigCount(static_cast<unsigned long>(s.ks));
  r.criticals_observed = BigCount(static_cast<unsigned long>(s.criticals));
  r.criticals_odd = BigCount(static_cast<unsigned long>(s.criticals_odd));
  r.criticals_even = BigCount(static_cast<unsigned long>(s.criticals_even));
  return r;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
  std::vector<std::thread> pool;
  unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  for (unsigned w = 0; w < count; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += count) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

// Applies the filter chain to a batch of children in order. Shared sets make
// the result identical to processing all children in one go.
struct ChainState {
  std::unordered_set<std::string> exact;
  IsomorphismFilter iso;
};

struct ChainCounts {
  std::size_t connected = 0, unique = 0, noniso = 0, ks = 0;
};

std::vector<Hypergraph> filter_chain(std::vector<Hypergraph> children, ChainState& st, ChainCounts& counts,
                                     unsigned workers) {
  std::vector<Hypergraph> unique;
  for (auto& c : children) {
    if (!is_connected(c)) continue;
    ++counts.connected;
    if (!st.exact.insert(serialize_mmp(c)).second) continue;
    ++counts.unique;
    unique.push_back(std::move(c));
  }
  std::vector<CanonicalForm> forms(unique.size());
  parallel_for(unique.size(), workers, [&](std::size_t i) { forms[i] = canonical_form(unique[i]); });
  std::vector<Hypergraph> reps;
  for (std::size_t i = 0; i < unique.size(); ++i)
    if (st.iso.insert(std::move(forms[i]))) reps.push_back(std::move(unique[i]));
  counts.noniso += reps.size();
  std::vector<char> ks(reps.size(), 0);
  parallel_for(reps.size(), workers, [&](std::size_t i) { ks[i] = is_ks(reps[i]) ? 1 : 0; });
  std::vector<Hypergraph> out;
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (ks[i]) out.push_back(std::move(reps[i]));
  counts.ks += out.size();
  return out;
}

constexpr std::size_t kBatchInputs = 256;

}  // namespace

double calibrate_increment(const std::vector<Hypergraph>& pilot, std::size_t total_inputs, std::size_t target,
                           bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (pilot.empty() || total_inputs == 0) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  std::vector<Hypergraph> children;
  std::size_t child_count = 0;
  for (const auto& h : pilot)
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      children.push_back(renormalize(h.without_edge(e)));
      ++child_count;
    }
  ChainState st;
  ChainCounts counts;
  auto survivors = filter_chain(std::move(children), st, counts, 1);
  if (survivors.empty()) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  double survival = static_cast<double>(survivors.size()) / static_cast<double>(child_count);
  double mean_edges = static_cast<double>(child_count) / static_cast<double>(pilot.size());
  double expected = static_cast<double>(total_inputs) * mean_edges * survival;
  return std::max(1.0, expected / static_cast<double>(target));
}

std::vector<CriticalFinding> find_criticals(const std::vector<Hypergraph>& hs, unsigned workers) {
  std::vector<CanonicalForm> forms(hs.size());
  std::vector<char> critical(hs.size(), 0);
  parallel_for(hs.size(), workers, [&](std::size_t i) {
    critical[i] = is_critical(hs[i]) ? 1 : 0;
    if (critical[i]) forms[i] = canonical_form(hs[i]);
  });
  std::vector<std::size_t> keep;
  IsomorphismFilter seen;
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (critical[i] && seen.insert(forms[i])) keep.push_back(i);
  std::vector<CriticalFinding> out(keep.size());
  parallel_for(keep.size(), workers, [&](std::size_t k) {
    const auto& h = hs[keep[k]];
    auto& f = out[k];
    f.hypergraph = renormalize(h);
    f.form = forms[keep[k]];
    f.parity = has_parity_proof(h);
    f.biggest_loop = biggest_loop(h).size;
    auto v = h.vertex_count(), e = h.edge_count();
    f.unusual = v < 26 || v > 60 || e < 13 || e > 41;
  });
  return out;
}

StageOutput run_stage(const std::vector<Hypergraph>& inputs, unsigned edges, double increment, Selection mode,
                      SamplerSeed seed, unsigned workers, bool check_criticality) {
  auto t0 = std::chrono::steady_clock::now();
  StageOutput out;
  auto& r = out.result;
  r.edges = edges;
  r.inputs = inputs.size();
  r.increment = increment;
  Thinner thin(increment, mode, seed);
  ChainState st;
  ChainCounts counts;
  for (std::size_t first = 0; first < inputs.size(); first += kBatchInputs) {
    std::vector<Hypergraph> children;
    std::size_t last = std::min(inputs.size(), first + kBatchInputs);
    for (std::size_t i = first; i < last; ++i) {
      const auto& h = inputs[i];
      if (h.edge_count() != edges + 1u)
        throw std::runtime_error("stage input with " + std::to_string(h.edge_count()) + " edges, expected " +
                                 std::to_string(edges + 1));
      for (std::size_t e = 0; e < h.edge_count(); ++e)
        if (thin.keep()) children.push_back(renormalize(h.without_edge(e)));
    }
    r.children += children.size();
    auto ks = filter_chain(std::move(children), st, counts, workers);
    for (auto& h : ks) out.survivors.push_back(std::move(h));
  }
  r.connected = counts.connected;
  r.unique = counts.unique;
  r.noniso = counts.noniso;
  r.ks = counts.ks;
  if (check_criticality) {
    std::vector<char> crit(out.survivors.size(), 0);
    parallel_for(out.survivors.size(), workers, [&](std::size_t i) { crit[i] = is_critical(out.survivors[i]) ? 1 : 0; });
    for (std::size_t i = 0; i < out.survivors.size(); ++i)
      if (crit[i]) out.criticals.push_back(out.survivors[i]);
  }
  r.criticals = out.criticals.size();
  (edges % 2 ? r.criticals_odd : r.criticals_even) = r.criticals;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

namespace {

std::filesystem::path stage_path(const std::filesystem::path& dir, unsigned edges, const char* suffix) {
  char name[32];
  std::snprintf(name, sizeof name, "edges-%02u%s", edges, suffix);
  return dir / name;
}

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_lines(std::ostream& out, const std::vector<Hypergraph>& hs) {
  for (const auto& h : hs) out << serialize_mmp(h) << '\n';
}

std::vector<Hypergraph> read_stage_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return parse_mmp_lines(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("corrupt stage file " + path.string() + ": " + e.what());
  }
}

Hypergraph load_start(const std::string& start) {
  if (start == "cell600") return build_600cell().hypergraph;
  std::ifstream in(start);
  if (!in) throw ConfigError("cannot read start file '" + start + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      return parse_mmp(trim(line));
    } catch (const std::exception& e) {
      throw ConfigError("start file '" + start + "': " + e.what());
    }
  }
  throw ConfigError("start file '" + start + "' holds no hypergraph");
}

}  // namespace

std::vector<StageResult> run_survey(const SurveyConfig& cfg, const StageCallback& on_stage) {
  Hypergraph start = renormalize(load_start(cfg.start));
  auto parent_edges = static_cast<unsigned>(start.edge_count());
  if (cfg.edges_to > parent_edges)
    throw ConfigError("edges_to " + std::to_string(cfg.edges_to) + " exceeds the start's " +
                      std::to_string(parent_edges) + " edges");
  if (cfg.output.empty()) throw ConfigError("missing output directory");
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw std::runtime_error("cannot create " + cfg.output.string() + ": " + ec.message());

  std::clog << "survey: seed " << cfg.seed.seed
            << (cfg.seed.provenance == SamplerSeed::Provenance::Entropy ? " (entropy)" : " (user)") << '\n';

  std::vector<StageResult> results;
  std::vector<Hypergraph> survivors;
  bool exhaustive = true;
  for (unsigned edges = parent_edges + 1; edges-- > cfg.edges_to;) {
    auto mmp = stage_path(cfg.output, edges, ".mmp");
    auto crit = stage_path(cfg.output, edges, ".criticals.mmp");
    auto json = stage_path(cfg.output, edges, ".json");
    if (std::filesystem::exists(mmp) && std::filesystem::exists(crit) && std::filesystem::exists(json)) {
      std::ifstream in(json);
      std::stringstream ss;
      ss << in.rdbuf();
      StageResult r = stage_from_json(ss.str());
      survivors = read_stage_file(mmp);
      auto archived = read_stage_file(crit);
      if (r.edges != edges || survivors.size() != r.ks || archived.size() != r.criticals)
        throw std::runtime_error("stage files for " + std::to_string(edges) + " edges disagree with their record");
      exhaustive = r.exhaustive;
      results.push_back(r);
      if (on_stage) on_stage(r, true);
      continue;
    }

    StageOutput out;
    if (edges == parent_edges) {
      auto t0 = std::chrono::steady_clock::now();
      auto& r = out.result;
      r.edges = edges;
      r.children = r.connected = r.unique = r.noniso = 1;
      if (is_ks(start)) {
        out.survivors.push_back(start);
        if (cfg.check_criticality && is_critical(start)) out.criticals.push_back(start);
      }
      r.ks = out.survivors.size();
      r.criticals = out.criticals.size();
      (edges % 2 ? r.criticals_odd : r.criticals_even) = r.criticals;
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      double increment = 1.0;
      if (cfg.increment) {
        increment = *cfg.increment;
      } else {
        std::vector<Hypergraph> pilot(survivors.begin(),
                                      survivors.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.pilot, survivors.size())));
        bool degenerate = false;
        increment = calibrate_increment(pilot, survivors.size(), cfg.target, &degenerate);
        if (degenerate && !survivors.empty())
          std::clog << "survey: pilot for " << edges << " edges left no survivors; using increment 1\n";
      }
      SplitMix64 mix(cfg.seed.seed, edges);
      out = run_stage(survivors, edges, increment, cfg.mode, SamplerSeed::user(mix.next()), cfg.workers,
                      cfg.check_criticality);
    }
    exhaustive = exhaustive && out.result.increment == 1.0;
    out.result.exhaustive = exhaustive;
    for (const auto& c : find_criticals(out.criticals, 1))
      if (c.unusual)
        std::clog << "survey: NEW KIND critical " << c.hypergraph.vertex_count() << "-" << c.hypergraph.edge_count()
                  << " outside the known 26..60 vertex / 13..41 edge range: " << serialize_mmp(c.hypergraph) << '\n';

    write_atomically(crit, [&](std::ostream& o) { write_lines(o, out.criticals); });
    write_atomically(mmp, [&](std::ostream& o) { write_lines(o, out.survivors); });
    write_atomically(json, [&](std::ostream& o) { o << stage_to_json(out.result) << '\n'; });
    survivors = std::move(out.survivors);
    results.push_back(out.result);
    if (on_stage) on_stage(out.result, false);
  }

  write_atomically(cfg.output / "records.jsonl", [&](std::ostream& o) {
    for (const auto& r : results) o << survey_record_to_json(stage_to_record(r, static_cast<int>(parent_edges))) << '\n';
  });
  return results;
}

}  // namespace ks
