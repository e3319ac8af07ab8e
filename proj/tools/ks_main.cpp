// ks: command-line front end. Exit codes: 0 success, 1 usage or
// configuration error, 2 runtime failure (I/O, bad data, failed checks).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "ks/canon.hpp"
#include "ks/coloring.hpp"
#include "ks/geometry.hpp"
#include "ks/layout.hpp"
#include "ks/loops.hpp"
#include "ks/mmp.hpp"
#include "ks/stats.hpp"
#include "ks/strip.hpp"
#include "ks/survey.hpp"

namespace {

using namespace ks;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Hypergraph> read_mmp_file(const std::string& path, ParseOptions opts) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read " + path);
  return parse_mmp_lines(in, opts);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path);
  return out;
}

std::string signature(const Hypergraph& h) {
  return std::to_string(h.vertex_count()) + "-" + std::to_string(h.edge_count());
}

SamplerSeed resolve_seed(const std::optional<std::uint64_t>& given) {
  auto seed = given ? SamplerSeed::user(*given) : SamplerSeed::from_entropy();
  std::clog << "seed " << seed.seed << (given ? " (user)" : " (entropy)") << '\n';
  return seed;
}

BigCount parse_count(const std::string& text, const char* what) {
  BigCount v;
  if (v.set_str(text, 10) != 0 || v < 0) throw CLI::ValidationError(std::string(what) + " must be a non-negative integer");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kochen-Specker hypergraph toolkit"};
  app.require_subcommand(1);
  bool lenient = false;
  app.add_flag("--lenient", lenient, "Skip empty edge tokens and accept a missing final '.' when reading MMP files");

  // validate
  auto* validate = app.add_subcommand("validate", "Report MMP condition violations per line");
  std::string validate_in;
  validate->add_option("--in", validate_in, "MMP file")->required();

  // strip
  auto* strip = app.add_subcommand("strip", "Remove edges: exhaustive, thinned, or sampled subsets");
  std::string strip_in, strip_out, window;
  unsigned strip_k = 1;
  double increment = 1.0;
  bool strip_random = false, connected_only = false, renorm = false, one_each = false;
  std::optional<std::uint64_t> strip_seed;
  std::optional<std::size_t> sample;
  strip->add_option("--in", strip_in, "MMP file; the first line is the parent")->required();
  strip->add_option("--out", strip_out, "Output MMP file")->required();
  strip->add_option("--k", strip_k, "Edges to remove");
  strip->add_option("--window", window, "Rank window A:B (colex order, B exclusive)");
  strip->add_option("--increment", increment, "Keep every i-th subset on average (i >= 1, may be fractional)")
      ->check(CLI::Range(1.0, 1e300));
  strip->add_flag("--random", strip_random, "Thin randomly instead of with uniform spacing");
  strip->add_option("--seed", strip_seed, "Random seed (default: derived from clock, pid and CPU time)");
  strip->add_flag("--connected-only", connected_only, "Drop unconnected outputs");
  strip->add_flag("--renormalize", renorm, "Close vertex-name gaps in outputs");
  strip->add_option("--sample", sample, "Draw this many uniform random k-removals (with replacement) instead");
  strip->add_flag("--one-each", one_each, "Strip one edge at a time from every input line, dropping exact duplicates");

  // canon
  auto* canon = app.add_subcommand("canon", "Canonical forms, one per isomorphism class");
  std::string canon_in, canon_out;
  bool mapping = false;
  canon->add_option("--in", canon_in, "MMP file")->required();
  canon->add_option("--out", canon_out, "Canonical forms, first appearance order")->required();
  canon->add_flag("--mapping", mapping, "Print each input's vertex map onto its canonical labels");

  // color
  auto* color = app.add_subcommand("color", "Split inputs into 0/1-colorable ones and KS sets");
  std::string color_in, out_colorable, out_ks;
  bool witness = false;
  color->add_option("--in", color_in, "MMP file")->required();
  color->add_option("--out-colorable", out_colorable, "Colorable inputs");
  color->add_option("--out-ks", out_ks, "Non-colorable inputs");
  color->add_flag("--witness", witness, "Print the vertices valued 1 for each colorable input");

  // critical
  auto* critical = app.add_subcommand("critical", "Keep the critical KS sets, one per isomorphism class");
  std::string critical_in, critical_out;
  unsigned critical_workers = 1;
  critical->add_option("--in", critical_in, "MMP file")->required();
  critical->add_option("--out", critical_out, "Critical sets (renormalized)")->required();
  critical->add_option("--workers", critical_workers, "Threads")->check(CLI::Range(1u, 1024u));

  // loops
  auto* loops = app.add_subcommand("loops", "Biggest loop per input, annotated");
  std::string loops_in, draw_dir, backend = "asy";
  bool all_max = false;
  double tension = 1.0, curl = 1.0;
  loops->add_option("--in", loops_in, "MMP file")->required();
  loops->add_flag("--all-max", all_max, "List every arrangement of the biggest loop");
  loops->add_option("--draw", draw_dir, "Write drawing sources into this directory");
  loops->add_option("--backend", backend, "svg or asy")->check(CLI::IsMember({"svg", "asy"}));
  loops->add_option("--tension", tension, "Curve tension for non-polygon edges")->check(CLI::PositiveNumber);
  loops->add_option("--curl", curl, "End curl for non-polygon edges");

  // cell600
  auto* cell = app.add_subcommand("cell600", "Build the 60-75 hypergraph from the 600-cell");
  std::string out_mmp, out_vectors;
  cell->add_option("--out-mmp", out_mmp, "MMP line")->required();
  cell->add_option("--out-vectors", out_vectors, "Rays, one per vertex, as a+bt tokens (coordinates doubled)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a vector assignment against each input's edges");
  std::string verify_in, verify_vectors;
  verify->add_option("--in", verify_in, "MMP file")->required();
  verify->add_option("--vectors", verify_vectors, "Vector file; line i belongs to vertex i")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Population estimates");
  stats->require_subcommand(1);
  auto* coupon = stats->add_subcommand("coupon", "Class-count estimate from samples with replacement");
  std::string coupon_n, coupon_c;
  unsigned digits = PrecisionReal::kDefaultDigits;
  coupon->add_option("--n", coupon_n, "Samples")->required();
  coupon->add_option("--c", coupon_c, "Distinct classes observed")->required();
  coupon->add_option("--digits", digits, "Significant digits")->check(CLI::Range(10u, 10000u));
  auto* bounds = stats->add_subcommand("bounds", "Confidence bounds on a population count");
  std::string bounds_K, bounds_n, bounds_m;
  double level = 0.95;
  bounds->add_option("--K", bounds_K, "Population the rate applies to")->required();
  bounds->add_option("--n", bounds_n, "Sample size")->required();
  bounds->add_option("--m", bounds_m, "Successes")->required();
  bounds->add_option("--level", level, "Confidence level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  bounds->add_option("--digits", digits, "Significant digits")->check(CLI::Range(10u, 10000u));
  auto* aggregate = stats->add_subcommand("aggregate", "Tabulate survey records");
  std::string agg_in, agg_out, agg_plot;
  aggregate->add_option("--in", agg_in, "Records, one JSON object per line")->required();
  aggregate->add_option("--out", agg_out, "Tab separated table")->required();
  aggregate->add_option("--plot", agg_plot, "Plot data file");
  aggregate->add_option("--level", level, "Confidence level")->check(CLI::Range(1e-12, 1.0 - 1e-12));

  // survey
  auto* survey = app.add_subcommand("survey", "Run the strip-and-filter survey");
  std::string config_path;
  survey->add_option("--config", config_path, "key = value configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ParseOptions opts;
  opts.lenient = lenient;

  try {
    if (*validate) {
      opts.validate = false;
      auto hs = read_mmp_file(validate_in, opts);
      std::size_t bad = 0;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        auto report = validate_mmp(hs[i]);
        if (report.empty()) {
          std::cout << i + 1 << "\tok\t" << signature(hs[i]) << '\n';
          continue;
        }
        ++bad;
        for (const auto& v : report) std::cout << i + 1 << "\tinvalid\t" << v.message << '\n';
      }
      return bad ? 2 : 0;
    }

    if (*strip) {
      auto hs = read_mmp_file(strip_in, opts);
      if (hs.empty()) throw RuntimeFailure("no input hypergraph");
      StripPlan plan;
      plan.k = strip_k;
      plan.increment = increment;
      plan.selection = strip_random ? Selection::Randomized : Selection::UniformSpacing;
      plan.connected_only = connected_only;
      plan.renormalize_output = renorm;
      if (!window.empty()) {
        auto colon = window.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--window expects A:B");
        plan.start = parse_rank(std::string_view(window).substr(0, colon));
        plan.end = parse_rank(std::string_view(window).substr(colon + 1));
      }
      bool needs_seed = sample.has_value() || (strip_random && increment > 1.0);
      if (needs_seed) plan.seed = resolve_seed(strip_seed);

      auto out = open_out(strip_out);
      std::size_t written = 0;
      auto emit = [&](const Hypergraph& h) {
        out << serialize_mmp(h) << '\n';
        ++written;
      };
      if (one_each) {
        for (const auto& h : strip_one_each(hs, plan)) emit(h);
      } else if (sample) {
        for (auto& h : sample_subsets(hs.front(), strip_k, *sample, plan.seed)) {
          if (connected_only && !is_connected(h)) continue;
          emit(renorm ? renormalize(h) : h);
        }
      } else {
        enumerate_subsets(hs.front(), plan, [&](Hypergraph h) { emit(h); });
      }
      std::clog << written << " hypergraphs written\n";
      return 0;
    }

    if (*canon) {
      auto hs = read_mmp_file(canon_in, opts);
      auto out = open_out(canon_out);
      IsomorphismFilter seen;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        auto lab = canonical_labeling(hs[i]);
        if (mapping) {
          std::cout << i + 1 << '\t';
          for (std::size_t c = 0; c < lab.order.size(); ++c)
            std::cout << (c ? " " : "") << vertex_name(lab.order[c]) << "->" << vertex_name(static_cast<VertexId>(c));
          std::cout << '\t' << lab.form.line << '\n';
        }
        std::string line = lab.form.line;
        if (seen.insert(std::move(lab.form))) out << line << '\n';
      }
      std::clog << hs.size() << " inputs, " << seen.size() << " classes\n";
      return 0;
    }

    if (*color) {
      auto hs = read_mmp_file(color_in, opts);
      std::optional<std::ofstream> col, ks;
      if (!out_colorable.empty()) col = open_out(out_colorable);
      if (!out_ks.empty()) ks = open_out(out_ks);
      std::size_t n_ks = 0;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        auto r = is_colorable(hs[i]);
        if (r.colorable) {
          if (col) *col << serialize_mmp(hs[i]) << '\n';
          if (witness) {
            std::cout << i + 1 << '\t';
            for (auto v : hs[i].vertices())
              if (r.witness->value[v]) std::cout << vertex_name(v);
            std::cout << '\n';
          }
        } else {
          ++n_ks;
          if (ks) *ks << serialize_mmp(hs[i]) << '\n';
        }
      }
      std::clog << hs.size() << " inputs, " << n_ks << " KS sets\n";
      return 0;
    }

    if (*critical) {
      auto hs = read_mmp_file(critical_in, opts);
      auto found = find_criticals(hs, critical_workers);
      auto out = open_out(critical_out);
      for (const auto& f : found) {
        out << serialize_mmp(f.hypergraph) << '\n';
        std::cout << signature(f.hypergraph) << "\tparity=" << (f.parity ? "yes" : "no") << "\tloop=" << f.biggest_loop
                  << (f.unusual ? "\tNEW-KIND" : "") << '\n';
        if (f.unusual)
          std::clog << "warning: critical " << signature(f.hypergraph)
                    << " lies outside the known 26..60 vertex / 13..41 edge range\n";
      }
      std::clog << hs.size() << " inputs, " << found.size() << " critical classes\n";
      return 0;
    }

    if (*loops) {
      auto hs = read_mmp_file(loops_in, opts);
      LayoutConfig cfg;
      cfg.tension = tension;
      cfg.curl = curl;
      cfg.backend = backend == "svg" ? LayoutBackend::Svg : LayoutBackend::Asymptote;
      if (!draw_dir.empty()) std::filesystem::create_directories(draw_dir);
      auto draw = [&](const Hypergraph& h, const Loop& loop, const std::string& stem) {
        if (draw_dir.empty()) return;
        auto out = open_out((std::filesystem::path(draw_dir) / (stem + (backend == "svg" ? ".svg" : ".asy"))).string());
        out << emit_layout(h, loop, cfg);
      };
      for (std::size_t i = 0; i < hs.size(); ++i) {
        auto best = biggest_loop(hs[i]);
        std::string stem = "line-" + std::to_string(i + 1);
        if (best.size == 0) {
          std::cout << signature(hs[i]) << "\tloop=0\n";
          continue;
        }
        if (!all_max) {
          std::cout << signature(hs[i]) << "\tloop=" << best.size << '\t' << annotate_loop(hs[i], best.witness) << '\n';
          draw(hs[i], best.witness, stem);
          continue;
        }
        auto all = loop_arrangements(hs[i], best.size);
        std::cout << signature(hs[i]) << "\tloop=" << best.size << "\tarrangements=" << all.size() << '\n';
        for (std::size_t k = 0; k < all.size(); ++k) {
          std::cout << "  " << annotate_loop(hs[i], all[k]) << '\n';
          draw(hs[i], all[k], stem + "-" + std::to_string(k + 1));
        }
      }
      return 0;
    }

    if (*cell) {
      auto set = build_600cell();
      auto out = open_out(out_mmp);
      out << serialize_mmp(set.hypergraph) << '\n';
      if (!out_vectors.empty()) {
        auto vout = open_out(out_vectors);
        vout << "# 600-cell rays with doubled coordinates, one line per vertex in vertex order\n";
        write_vectors(vout, set.rays);
      }
      std::clog << set.rays.size() << " rays, " << set.bases.size() << " bases\n";
      return 0;
    }

    if (*verify) {
      auto hs = read_mmp_file(verify_in, opts);
      std::ifstream vin(verify_vectors);
      if (!vin) throw RuntimeFailure("cannot read " + verify_vectors);
      auto rays = parse_vectors(vin);
      std::size_t bad = 0;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        std::map<VertexId, Ray> assignment;
        for (auto v : hs[i].vertices())
          if (v < rays.size()) assignment[v] = rays[v];
        auto report = verify_assignment(hs[i], assignment);
        if (report.ok()) {
          std::cout << i + 1 << "\tok\n";
          continue;
        }
        ++bad;
        for (auto v : report.missing) std::cout << i + 1 << "\tmissing vector for " << vertex_name(v) << '\n';
        for (const auto& o : report.violations)
          std::cout << i + 1 << "\tedge " << o.edge + 1 << ": " << vertex_name(o.u) << "." << vertex_name(o.v) << " = "
                    << o.product << '\n';
      }
      return bad ? 2 : 0;
    }

    if (*coupon) {
      auto est = coupon_mle({parse_count(coupon_n, "--n"), parse_count(coupon_c, "--c")}, digits);
      if (est.bounded)
        std::cout << est.j.get_str() << '\n';
      else
        std::cout << "unbounded (no j below " << est.cap.get_str() << ")\n";
      return 0;
    }

    if (*bounds) {
      BernoulliInput in{PrecisionReal(bounds_K, digits), parse_count(bounds_n, "--n"), parse_count(bounds_m, "--m"), level};
      auto b = confidence_bounds(in, digits);
      std::cout << "lower\t" << b.lower.to_string(6) << "\nupper\t" << b.upper.to_string(6) << '\n';
      return 0;
    }

    if (*aggregate) {
      std::ifstream in(agg_in);
      if (!in) throw RuntimeFailure("cannot read " + agg_in);
      auto report = survey_aggregate(read_survey_records(in), level);
      auto out = open_out(agg_out);
      write_survey_table(out, report);
      if (!agg_plot.empty()) {
        auto plot = open_out(agg_plot);
        write_survey_plot_data(plot, report);
      }
      return 0;
    }

    if (*survey) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read " + config_path);
      auto cfg = parse_survey_config(in);
      run_survey(cfg, [](const StageResult& r, bool resumed) {
        std::clog << "edges " << r.edges << (resumed ? " (resumed)" : "") << ": inputs " << r.inputs << ", increment "
                  << r.increment << ", children " << r.children << ", connected " << r.connected << ", unique "
                  << r.unique << ", classes " << r.noniso << ", KS " << r.ks << ", critical " << r.criticals << " ("
                  << r.seconds << " s)\n";
      });
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
