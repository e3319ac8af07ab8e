#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "ks/canon.hpp"
#include "ks/survey.hpp"
#include "support.hpp"

using namespace ks;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ks-survey-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SurveyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_survey_config(in);
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse("# survey\noutput = /tmp/x\nedges_to = 70\nseed = 12\nmode = uniform\nincrement = 2.5\nworkers = 3\n");
  CHECK(cfg.output == "/tmp/x");
  CHECK(cfg.edges_to == 70);
  CHECK(cfg.seed.seed == 12);
  CHECK(cfg.seed.provenance == SamplerSeed::Provenance::User);
  CHECK(cfg.mode == Selection::UniformSpacing);
  CHECK(cfg.increment == 2.5);
  CHECK(cfg.workers == 3);
  CHECK(cfg.target == 50000);
  CHECK(cfg.start == "cell600");

  auto defaults = parse("output = o\nedges_to = 60\n");
  CHECK_FALSE(defaults.increment);
  CHECK(defaults.mode == Selection::Randomized);
  CHECK(defaults.seed.provenance == SamplerSeed::Provenance::Entropy);

  CHECK_THROWS_AS(parse("edges_to = 60\n"), ConfigError);
  CHECK_THROWS_AS(parse("output = o\n"), ConfigError);
  CHECK_THROWS_AS(parse("output = o\nedges_to = 60\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("output = o\nedges_to = sixty\n"), ConfigError);
  CHECK_THROWS_AS(parse("output = o\nedges_to = 60\nedges_to = 61\n"), ConfigError);
  CHECK_THROWS_AS(parse("output = o\nedges_to = 60\nincrement = 0.5\n"), ConfigError);
  try {
    parse("output = o\nedges_to = 60\nnonsense\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("stage json round trip") {
  StageResult s;
  s.edges = 71;
  s.inputs = 19;
  s.increment = 1;
  s.children = 1387;
  s.connected = 1387;
  s.unique = 1200;
  s.noniso = 154;
  s.ks = 154;
  s.exhaustive = true;
  s.seconds = 0.25;
  auto back = stage_from_json(stage_to_json(s));
  CHECK(stage_to_json(back) == stage_to_json(s));
  CHECK(back.noniso == 154);
  auto rec = stage_to_record(s, 75);
  CHECK(rec.edges == 71);
  REQUIRE(rec.noniso_estimate);
  CHECK(*rec.noniso_estimate == 154);
  s.exhaustive = false;
  CHECK_FALSE(stage_to_record(s, 75).noniso_estimate);
}

TEST_CASE("criticals are found once per class") {
  std::mt19937_64 rng(2);
  auto h = kstest::corpus_hypergraph("38-19");
  std::vector<VertexId> perm(h.id_space());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto found = find_criticals({h, relabel(h, perm), h.without_edge(3), kstest::derived_set("26-13")}, 2);
  REQUIRE(found.size() == 2);
  CHECK(found[0].hypergraph.edge_count() == 19);
  CHECK(found[0].parity);  // 19 edges, every ray in two of them
  CHECK(found[1].parity);
  CHECK_FALSE(found[0].unusual);
  CHECK_FALSE(found[1].unusual);
}

TEST_CASE("critical sets outside the usual range are flagged") {
  // 10-5 and 21-7: far below 26 vertices, and not 600-cell subsets
  auto found = find_criticals({kstest::complete_graph_dual(5), kstest::complete_graph_dual(7)});
  REQUIRE(found.size() == 2);
  for (const auto& f : found) CHECK(f.unusual);
}

TEST_CASE("calibration") {
  bool degenerate = false;
  CHECK(calibrate_increment({kstest::corpus_hypergraph("38-19")}, 10, 5, &degenerate) == 1.0);
  CHECK(degenerate);
  // the 600-cell's 75 children collapse to one class
  double inc = calibrate_increment({kstest::cell600().hypergraph}, 1000, 10, &degenerate);
  CHECK_FALSE(degenerate);
  CHECK(inc == doctest::Approx(1000.0 * 75 * (1.0 / 75) / 10));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("exhaustive survey down to 72 edges, with resume") {
  TempDir dir;
  SurveyConfig cfg;
  cfg.output = dir.path;
  cfg.edges_to = 72;
  cfg.increment = 1.0;
  cfg.seed = SamplerSeed::user(1);
  std::vector<std::pair<unsigned, bool>> seen;
  auto stages = run_survey(cfg, [&](const StageResult& s, bool resumed) { seen.emplace_back(s.edges, resumed); });
  REQUIRE(stages.size() == 4);
  std::size_t classes[] = {1, 1, 4, 19};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& s = stages[i];
    CHECK(s.edges == 75 - i);
    CHECK(s.noniso == classes[i]);
    CHECK(s.ks == s.noniso);
    CHECK(s.criticals == 0);
    CHECK(s.exhaustive);
    CHECK(s.children >= s.connected);
    CHECK(s.connected >= s.unique);
    CHECK(s.unique >= s.noniso);
    CHECK(s.noniso >= s.ks);
    CHECK(s.ks >= s.criticals);
    CHECK(fs::exists(dir.path / ("edges-" + std::to_string(s.edges) + ".mmp")));
    CHECK(fs::exists(dir.path / ("edges-" + std::to_string(s.edges) + ".criticals.mmp")));
  }
  CHECK(stages[1].children == 75);
  CHECK(stages[2].children == 74);
  CHECK(stages[3].children == 4 * 73);
  CHECK(fs::exists(dir.path / "records.jsonl"));

  // Survivor files hold mutually non-isomorphic KS sets of the right size.
  std::ifstream in(dir.path / "edges-72.mmp");
  auto survivors = parse_mmp_lines(in);
  CHECK(survivors.size() == 19);
  IsomorphismFilter f;
  for (const auto& h : survivors) {
    CHECK(h.edge_count() == 72);
    CHECK(is_ks(h));
    f.insert(h);
  }
  CHECK(f.size() == 19);

  fs::remove(dir.path / "edges-72.json");
  seen.clear();
  auto again = run_survey(cfg, [&](const StageResult& s, bool resumed) { seen.emplace_back(s.edges, resumed); });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == std::pair{75u, true});
  CHECK(seen[1] == std::pair{74u, true});
  CHECK(seen[2] == std::pair{73u, true});
  CHECK(seen[3] == std::pair{72u, false});
  CHECK(again[3].noniso == 19);
}

TEST_CASE("thinned survey is reproducible from its seed") {
  TempDir a, b;
  SurveyConfig cfg;
  cfg.edges_to = 71;
  cfg.increment = 3.0;
  cfg.seed = SamplerSeed::user(99);
  cfg.output = a.path;
  auto ra = run_survey(cfg);
  cfg.output = b.path;
  auto rb = run_survey(cfg);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].children == rb[i].children);
    CHECK(ra[i].noniso == rb[i].noniso);
    if (i > 0) CHECK_FALSE(ra[i].exhaustive);
  }
  std::ifstream fa(a.path / "edges-71.mmp"), fb(b.path / "edges-71.mmp");
  std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);
}

TEST_CASE("bad settings") {
  TempDir dir;
  SurveyConfig cfg;
  cfg.output = dir.path;
  cfg.edges_to = 80;
  CHECK_THROWS_AS(run_survey(cfg), ConfigError);
  cfg.edges_to = 70;
  cfg.start = (dir.path / "missing.mmp").string();
  CHECK_THROWS_AS(run_survey(cfg), ConfigError);
}
