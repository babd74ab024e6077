#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rwre/errors.hpp"
#include "rwre/presets.hpp"
#include "rwre/stats.hpp"
#include "rwre/walk_sim.hpp"

using namespace rwre;

TEST_CASE("environment sites are deterministic and order independent") {
  const EnvModel m = presets::two_point_benchmark();
  QuenchedEnv a(m, 555), b(m, 555), c(m, 556);
  // Query b back to front, a front to back: values must agree anyway.
  std::vector<double> va, vb;
  for (long long x = -100; x <= 100; ++x) va.push_back(a.omega(x));
  for (long long x = 100; x >= -100; --x) vb.push_back(b.omega(x));
  std::reverse(vb.begin(), vb.end());
  CHECK(va == vb);
  bool all_same = true;
  for (long long x = -100; x <= 100; ++x)
    all_same = all_same && (c.omega(x) == va[static_cast<std::size_t>(x + 100)]);
  CHECK_FALSE(all_same);
  // Re-reading the same site is stable.
  CHECK(a.omega(17) == a.omega(17));
}

TEST_CASE("environment marginals match the model law") {
  const EnvModel m = presets::temkin_benchmark();
  QuenchedEnv env(m, 4242);
  double mean = 0.0;
  const long long sites = 10000;
  for (long long x = 0; x < sites; ++x) mean += env.omega(x);
  mean /= static_cast<double>(sites);
  const double p = m.fixed_p();
  const double expect = p * 0.4 + (1.0 - p) * 0.6;
  // sd of the site mean: 0.1 * sqrt(4 p (1-p)) / sqrt(sites) ~ 1e-3
  CHECK(std::fabs(mean - expect) < 0.005);
}

TEST_CASE("an always-right environment walks straight to its target") {
  Walker w(QuenchedEnv::constant(1.0), 99);
  CHECK(w.run_until(250, 1000));
  CHECK(w.total_steps() == 250);
  const auto o = w.outcome(250);
  CHECK(o.hit);
  CHECK(o.total_steps == 250);
  for (auto c : o.left_counts) CHECK(c == 0);
  CHECK(o.first_move.size() == 250);  // arrival site excluded
  for (const auto& [site, dir] : o.first_move) {
    CHECK(site >= 0);
    CHECK(site < 250);
    CHECK(dir == 1);
  }
}

TEST_CASE("hitting time of a homogeneous biased walk has the known mean") {
  // Right probability 3/4: E[T_n] = n / (2w - 1) = 2n.
  const long long n = 100;
  std::vector<double> times;
  for (int rep = 0; rep < 2000; ++rep) {
    Walker w(QuenchedEnv::constant(0.75), derive_seed(7100, rep));
    REQUIRE(w.run_until(n, 1000000));
    times.push_back(static_cast<double>(w.total_steps()));
  }
  // Var[T_1] = (1 - (2w-1)^2)/(2w-1)^3 = 6, so sd of the mean ~ 0.55.
  CHECK(std::fabs(mean(times) - 200.0) < 3.0);
}

TEST_CASE("steps split into n rights plus symmetric left pairs") {
  const EnvModel m = presets::two_point_benchmark();
  for (int rep = 0; rep < 30; ++rep) {
    Walker w(QuenchedEnv(m, derive_seed(31, rep)), derive_seed(32, rep));
    if (!w.run_until(50, 2000000)) continue;
    CHECK(w.total_steps() == 50 + 2 * w.left_steps());
  }
}

TEST_CASE("identical seeds reproduce the identical outcome") {
  const EnvModel m = presets::temkin_benchmark();
  auto run = [&] {
    Walker w(QuenchedEnv(m, 1001), 2002);
    w.run_until(200, 10000000);
    return w.outcome(200);
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.hit == b.hit);
  CHECK(a.total_steps == b.total_steps);
  CHECK(a.left_counts == b.left_counts);
  CHECK(a.first_move == b.first_move);
}

TEST_CASE("continuation reproduces the single long run bit for bit") {
  const EnvModel m = presets::two_point_benchmark();
  Walker two_stage(QuenchedEnv(m, 77), 78);
  REQUIRE(two_stage.run_until(100, 50000000));
  REQUIRE(two_stage.run_until(200, 50000000));
  Walker direct(QuenchedEnv(m, 77), 78);
  REQUIRE(direct.run_until(200, 50000000));
  const auto a = two_stage.outcome(200);
  const auto b = direct.outcome(200);
  CHECK(a.total_steps == b.total_steps);
  CHECK(a.left_counts == b.left_counts);
  CHECK(a.first_move == b.first_move);
}

TEST_CASE("a continued stop has the same hitting-time law as a fresh run") {
  const EnvModel m = presets::two_point_benchmark();
  const long long n = 30;
  std::vector<double> continued, fresh;
  for (int rep = 0; rep < 1200; ++rep) {
    // Both arms use their own seeds; only the stopping pattern differs.
    Walker wc(QuenchedEnv(m, derive_seed(91, rep)), derive_seed(92, rep));
    if (wc.run_until(15, 4000000) && wc.run_until(n, 4000000))
      continued.push_back(static_cast<double>(wc.total_steps()));
    Walker wf(QuenchedEnv(m, derive_seed(93, rep)), derive_seed(94, rep));
    if (wf.run_until(n, 4000000))
      fresh.push_back(static_cast<double>(wf.total_steps()));
  }
  REQUIRE(continued.size() > 1000);
  REQUIRE(fresh.size() > 1000);
  CHECK(ks_two_sample_pvalue(continued, fresh) > 0.01);
}

TEST_CASE("snapshot on a capped walk is censored with the cap spent") {
  const EnvModel m = presets::two_point_benchmark();
  Walker w(QuenchedEnv(m, 3), 4);
  const bool hit = w.run_until(1000, 500);
  CHECK_FALSE(hit);
  const auto o = w.outcome(1000);
  CHECK_FALSE(o.hit);
  CHECK(o.total_steps == 500);
}

TEST_CASE("run_to_hitting validates its arguments") {
  const EnvModel m = presets::two_point_benchmark();
  CHECK_THROWS_AS(run_to_hitting(m, 1, 0, 100, 2), ConfigError);
  CHECK_THROWS_AS(run_to_hitting(m, 1, 100, 50, 2), ConfigError);
  const auto o = run_to_hitting(m, 10, 5, 100000, 20);
  CHECK(o.n == 5);
}

TEST_CASE("default step cap reproduces frozen reference values") {
  CHECK(default_t_max(1000, 0.9) == 1077218ull);
  CHECK(default_t_max(100, 0.9) == 83406ull);
  CHECK(default_t_max(1, 1.0) == 500ull);
  CHECK(default_t_max(1000, 0.5) == 500000000ull);
  CHECK_THROWS_AS(default_t_max(10, 0.0), ConfigError);
}

TEST_CASE("censoring at n=100 under the shared continuation cap is rare") {
  // The cap is set once from the largest level of the study (1000 here);
  // at the first stop n=100 only a few percent of walks are cut.
  const EnvModel m = presets::two_point_benchmark();
  const std::uint64_t cap = default_t_max(1000, m.solve_kappa());
  CHECK(cap > 1000000ull);
  CHECK(cap < 1200000ull);
  int censored = 0;
  const int reps = 600;
  for (int rep = 0; rep < reps; ++rep) {
    Walker w(QuenchedEnv(m, derive_seed(1, rep)), derive_seed(2, rep));
    if (!w.run_until(100, cap)) ++censored;
  }
  const double frac = 100.0 * censored / reps;
  CHECK(frac < 9.4);  // 4.4 +/- 5 percentage points

  // Same window under the per-level cap 500 * 100^(1/0.9).
  int censored_local = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Walker w(QuenchedEnv(m, derive_seed(1, rep)), derive_seed(2, rep));
    if (!w.run_until(100, default_t_max(100, 0.9))) ++censored_local;
  }
  CHECK(100.0 * censored_local / reps < 9.4);
}
