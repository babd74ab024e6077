#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rwre/errors.hpp"
#include "rwre/harness.hpp"
#include "rwre/presets.hpp"
#include "rwre/rng.hpp"
#include "rwre/walk_sim.hpp"

using namespace rwre;

namespace {

const char* kSpecText = R"(# benchmark run, cut down
[model]
family = two_point
p = 0.548
a1 = 0.4
a2 = 0.7

[run]
label = demo
n_list = 20 40
replicates = 4
seed = 99
threads = 1

[estimate]
theta0 = center
level = 0.9
)";

ExperimentSpec mini_spec(long long reps, std::vector<long long> ns,
                         std::uint64_t seed) {
  ExperimentSpec s(presets::two_point_benchmark());
  s.example = "two_point";
  s.n_list = std::move(ns);
  s.replicates = reps;
  s.seed = seed;
  s.threads = 1;
  return s;
}

long long count_occurrences(const std::string& text, const std::string& pat) {
  long long k = 0;
  for (auto pos = text.find(pat); pos != std::string::npos;
       pos = text.find(pat, pos + pat.size()))
    ++k;
  return k;
}

}  // namespace

TEST_CASE("spec files parse into a validated experiment") {
  const auto spec = parse_spec_text(kSpecText);
  CHECK(spec.example == "demo");
  CHECK(spec.model.family() == Family::two_point);
  CHECK(spec.model.theta()[0] == 0.548);
  CHECK(spec.n_list == std::vector<long long>{20, 40});
  CHECK(spec.replicates == 4);
  CHECK(spec.seed == 99);
  CHECK(spec.threads == 1);
  CHECK(spec.theta0.empty());  // center keyword
  CHECK(spec.level == 0.9);
  CHECK(spec.step_cap() ==
        default_t_max(40, spec.model.solve_kappa(), spec.t_max_factor));
}

TEST_CASE("spec parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_spec_text("[model]\nfamily = venn\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("[model]\nfamily = two_point\np = 0.5\n"
                                  "a1 = 0.4\na2 = 0.7\nextra = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_spec_text("[nope]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("[model]\nfamily = two_point\np = 0.5\n"
                                  "p = 0.6\na1 = 0.4\na2 = 0.7\n"),
                  ConfigError);
  // Valid model, invalid run geometry.
  const std::string base =
      "[model]\nfamily = two_point\np = 0.548\na1 = 0.4\na2 = 0.7\n[run]\n";
  CHECK_THROWS_AS(parse_spec_text(base + "n_list = 40 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text(base + "replicates = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text(base + "t_max_factor = 0\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_spec_text(base + "[estimate]\nlevel = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_spec_text(base + "[estimate]\ntheta0 = 0.5 0.6\n"), ConfigError);
}

TEST_CASE("validation pins the true parameter inside the box interior") {
  ExperimentSpec s(EnvModel::two_point(0.99, 0.4, 0.7));
  s.n_list = {10};
  s.replicates = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  ExperimentSpec tiny = mini_spec(1, {100}, 1);
  tiny.t_max_factor = 1e-9;  // cap collapses below the hitting level
  CHECK_THROWS_AS(tiny.validate(), ConfigError);
}

TEST_CASE("summaries aggregate per cell with censoring fractions") {
  std::vector<ReplicateRecord> recs(3);
  for (auto& r : recs) {
    r.example = "demo";
    r.n = 100;
  }
  recs[0].theta_mle = {0.5};
  recs[0].theta_mom = 0.52;
  recs[1].theta_mle = {0.6};
  recs[2].censored = true;
  const auto rows = summarize(recs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].estimator == "mle");
  CHECK(rows[0].count == 2);
  CHECK(rows[0].censored_frac == doctest::Approx(1.0 / 3.0));
  CHECK(rows[0].median == doctest::Approx(0.55));
  CHECK(rows[1].estimator == "moment");
  CHECK(rows[1].count == 1);

  std::vector<ReplicateRecord> dead(2);
  for (auto& r : dead) {
    r.example = "demo";
    r.n = 100;
    r.censored = true;
  }
  CHECK_THROWS_AS(summarize(dead), EmptyCell);
}

TEST_CASE("record CSV serialization round-trips byte for byte") {
  const auto spec = parse_spec_text(kSpecText);
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 8);  // 2 stops x 4 replicates
  const std::string csv = emit_records_csv(records);
  const auto parsed = parse_records_csv(csv);
  CHECK(emit_records_csv(parsed) == csv);
  const std::string summary = emit_summary_csv(summarize(records));
  CHECK(summary.rfind("example,n,estimator,count,censored_frac,"
                      "q1,median,q3,iqr,outliers\n", 0) == 0);
}

TEST_CASE("censored rows serialize with every estimate field empty") {
  ReplicateRecord r;
  r.example = "demo";
  r.n = 100;
  r.replicate = 0;
  r.env_seed = 11;
  r.walk_seed = 12;
  r.censored = true;
  r.total_steps = 5000;
  const std::string csv = emit_records_csv({r});
  const auto line = csv.substr(csv.find('\n') + 1);
  CHECK(line == "demo,100,0,11,12,true,5000,,,,,,\n");
  const auto back = parse_records_csv(csv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].censored);
  CHECK(back[0].theta_mle.empty());
  CHECK_FALSE(back[0].theta_mom.has_value());
}

TEST_CASE("record CSV parsing rejects foreign layouts") {
  CHECK_THROWS_AS(parse_records_csv("a,b\n1,2\n"), ConfigError);
  const std::string header =
      "example,n,replicate,env_seed,walk_seed,censored,total_steps,"
      "theta_mle,sigma_hat,ci_lo,ci_hi,theta_mom,clipped_mom\n";
  CHECK(parse_records_csv(header).empty());
  CHECK_THROWS_AS(parse_records_csv(header + "demo,1,2\n"), ConfigError);
}

TEST_CASE("experiments are deterministic and scheduling independent") {
  auto spec = mini_spec(5, {20, 40}, 31415);
  const auto a = emit_records_csv(run_experiment(spec));
  const auto b = emit_records_csv(run_experiment(spec));
  CHECK(a == b);
  auto threaded = spec;
  threaded.threads = 4;
  CHECK(emit_records_csv(run_experiment(threaded)) == a);
}

TEST_CASE("adding replicates extends a run without disturbing earlier ones") {
  const auto small = run_experiment(mini_spec(5, {20, 40}, 7));
  auto big = run_experiment(mini_spec(8, {20, 40}, 7));
  std::vector<ReplicateRecord> trimmed;
  for (const auto& r : big)
    if (r.replicate < 5) trimmed.push_back(r);
  CHECK(emit_records_csv(trimmed) == emit_records_csv(small));
}

TEST_CASE("continuation reuses one walk per replicate across stops") {
  const auto records = run_experiment(mini_spec(6, {20, 40, 80}, 55));
  for (long long rep = 0; rep < 6; ++rep) {
    std::vector<const ReplicateRecord*> per_n;
    for (const auto& r : records)
      if (r.replicate == rep) per_n.push_back(&r);
    REQUIRE(per_n.size() == 3);
    std::sort(per_n.begin(), per_n.end(),
              [](auto* a, auto* b) { return a->n < b->n; });
    for (std::size_t k = 1; k < per_n.size(); ++k) {
      CHECK(per_n[k]->walk_seed == per_n[0]->walk_seed);
      CHECK(per_n[k]->total_steps >= per_n[k - 1]->total_steps);
    }
  }

  auto fresh = mini_spec(3, {20, 40}, 56);
  fresh.fresh_walk_per_n = true;
  const auto frecords = run_experiment(fresh);
  for (long long rep = 0; rep < 3; ++rep) {
    std::vector<std::uint64_t> seeds;
    for (const auto& r : frecords)
      if (r.replicate == rep) seeds.push_back(r.walk_seed);
    REQUIRE(seeds.size() == 2);
    CHECK(seeds[0] != seeds[1]);
  }
}

TEST_CASE("panel scales map the padded data range onto pixels") {
  SummaryRow row;
  row.whisker_lo = 0.2;
  row.whisker_hi = 0.8;
  const auto ps = panel_scale({row}, 0.5, 30.0, 300.0);
  CHECK(ps.vmin < 0.2);
  CHECK(ps.vmax > 0.8);
  CHECK(ps.y_of(ps.vmin) == doctest::Approx(300.0));
  CHECK(ps.y_of(ps.vmax) == doctest::Approx(30.0));
  const double mid = 0.5 * (ps.vmin + ps.vmax);
  CHECK(ps.y_of(mid) == doctest::Approx(165.0));
}

TEST_CASE("boxplots draw two boxes per cell and one reference line per panel") {
  const auto spec = parse_spec_text(kSpecText);
  const auto rows = summarize(run_experiment(spec));
  const std::map<std::string, double> stars = {{"demo", 0.548}};
  const std::string svg = emit_boxplot_svg(rows, stars);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_occurrences(svg, "class=\"box\"") == 4);  // 2 stops x 2 estimators
  CHECK(count_occurrences(svg, "class=\"theta-star\"") == 1);
  CHECK(emit_boxplot_svg(rows, stars) == svg);
  CHECK_THROWS_AS(emit_boxplot_svg(rows, {}), ConfigError);
}

TEST_CASE("standardized diagnostics accept genuinely normal inputs") {
  Stream rng(8080);
  std::vector<double> z(500);
  for (auto& x : z) x = rng.normal();
  const auto rep = diagnostics_from_standardized(z);
  CHECK(rep.count == 500);
  CHECK(rep.ks_pvalue > 0.01);
  CHECK_THROWS_AS(diagnostics_from_standardized(std::vector<double>(50, 0.0)),
                  InsufficientData);
}

TEST_CASE("experiment diagnostics report coverage at the largest stop") {
  auto spec = mini_spec(120, {50}, 2026);
  spec.threads = 4;
  const auto records = run_experiment(spec);
  const auto rep = diagnostics(records, spec);
  CHECK(rep.n_used == 50);
  CHECK(rep.count >= 100);
  CHECK(rep.ks_pvalue >= 0.0);
  CHECK(rep.ks_pvalue <= 1.0);
  CHECK(rep.with_ci > 0);
  CHECK(rep.coverage >= 0.8);
  CHECK(rep.coverage <= 1.0);
  CHECK_FALSE(rep.has_sigma_trend);
  const std::string text = rep.to_text();
  CHECK(text.find("coverage") != std::string::npos);

  auto starved = mini_spec(20, {30}, 3);
  CHECK_THROWS_AS(diagnostics(run_experiment(starved), starved),
                  InsufficientData);
}

TEST_CASE("mirrored-atom runs track the information trend across stops") {
  ExperimentSpec spec(presets::temkin_benchmark());
  spec.example = "temkin";
  spec.n_list = {30, 60};
  spec.replicates = 110;
  spec.seed = 11;
  spec.threads = 4;
  const auto rep = diagnostics(run_experiment(spec), spec);
  CHECK(rep.has_sigma_trend);
  REQUIRE(rep.median_sigma.size() == 2);
  CHECK(rep.median_sigma[0].first == 30);
  CHECK(rep.median_sigma[1].first == 60);
  CHECK(rep.median_sigma[0].second > 0.0);
}

TEST_CASE("files round-trip through the helpers") {
  const std::string path = "harness_rt_tmp.txt";
  write_file(path, "a,b\n1,2\n");
  CHECK(read_file(path) == "a,b\n1,2\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_file("no_such_file_anywhere.txt"), ConfigError);
}
