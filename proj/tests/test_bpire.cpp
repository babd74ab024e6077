#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "rwre/bpire.hpp"
#include "rwre/errors.hpp"
#include "rwre/presets.hpp"
#include "rwre/stats.hpp"

using namespace rwre;

TEST_CASE("log_q matches hand-computed mixture entries") {
  // Two-atom mixtures admit direct evaluation of C(u+v,v) E[w^{u+1}(1-w)^v].
  const EnvModel tp = presets::two_point_benchmark();
  CHECK(std::exp(log_q(tp, 0, 0)) ==
        doctest::Approx(0.548 * 0.4 + 0.452 * 0.7).epsilon(1e-12));
  const double q12 = 3.0 * (0.548 * 0.16 * 0.36 + 0.452 * 0.49 * 0.09);
  CHECK(std::exp(log_q(tp, 1, 2)) == doctest::Approx(q12).epsilon(1e-12));

  const EnvModel tk = EnvModel::temkin(0.4, 0.41);
  CHECK(std::exp(log_q(tk, 0, 0)) == doctest::Approx(0.518).epsilon(1e-12));
  // Mirrored atoms make Q(2,3) independent of the weight:
  // 10 * (p + (1-p)) * 0.4^3 * 0.6^3.
  const double q23 = 10.0 * 0.064 * 0.216;
  CHECK(std::exp(log_q(tk, 2, 3)) == doctest::Approx(q23).epsilon(1e-12));
  const EnvModel tk_star = presets::temkin_benchmark();
  CHECK(std::exp(log_q(tk_star, 2, 3)) == doctest::Approx(q23).epsilon(1e-12));

  const EnvModel be = presets::beta_benchmark();
  CHECK(std::exp(log_q(be, 0, 0)) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_q(tp, -1, 0), std::invalid_argument);
}

TEST_CASE("kernel rows are normalized and agree with log_q entrywise") {
  const EnvModel models[] = {presets::two_point_benchmark(),
                             presets::temkin_benchmark(),
                             presets::beta_benchmark()};
  for (const auto& m : models) {
    for (long long u : {0LL, 1LL, 2LL, 5LL, 10LL, 30LL}) {
      const auto row = kernel_row(m, u);
      REQUIRE(row.size() > 1);
      const double total = std::accumulate(row.begin(), row.end(), 0.0);
      CHECK(std::fabs(total - 1.0) < 1e-8);
      for (long long v : {0LL, 1LL, 7LL}) {
        REQUIRE(static_cast<std::size_t>(v) < row.size());
        CHECK(row[static_cast<std::size_t>(v)] ==
              doctest::Approx(std::exp(log_q(m, u, v))).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("a certain right step produces no failures") {
  Stream rng(11);
  for (long long z : {0LL, 3LL, 50LL})
    CHECK(step_z_given_omega(1.0, z, rng) == 0);
  CHECK_THROWS_AS(step_z_given_omega(0.0, 1, rng), std::invalid_argument);
}

TEST_CASE("one annealed step has conditional mean (u+1) E[rho]") {
  const EnvModel m = presets::two_point_benchmark();
  const long long u = 4;
  const double expect = static_cast<double>(u + 1) * m.moment_rho(1.0);
  Stream rng(2024);
  std::vector<double> draws;
  draws.reserve(20000);
  for (int i = 0; i < 20000; ++i)
    draws.push_back(static_cast<double>(step_z(m, u, rng)));
  const double se = sample_sd(draws) / std::sqrt(20000.0);
  CHECK(std::fabs(mean(draws) - expect) < 4.0 * se + 1e-9);
}

TEST_CASE("sampled steps from state 0 follow the analytic kernel row") {
  const EnvModel m = presets::two_point_benchmark();
  const auto row = kernel_row(m, 0);
  Stream rng(515);
  const long long draws = 50000;
  std::vector<long long> counts(row.size(), 0);
  for (long long i = 0; i < draws; ++i) {
    const long long z = step_z(m, 0, rng);
    if (static_cast<std::size_t>(z) < counts.size())
      ++counts[static_cast<std::size_t>(z)];
  }
  const auto gof = chi_square_pmf(counts, row, static_cast<double>(draws));
  CHECK(gof.dof > 3);
  CHECK(gof.pvalue > 0.001);
}

TEST_CASE("S inverts the tail series exactly for a constant environment") {
  // omega = 2/3 at every site gives rho = 1/2 and S = 1/(1+1/2+1/4+...) = 1/2.
  const EnvModel m = EnvModel::two_point(1.0, 2.0 / 3.0, 2.0 / 3.0);
  Stream rng(7);
  for (int i = 0; i < 5; ++i) {
    const auto s = sample_S(m, rng);
    CHECK(std::fabs(s.s_value - 0.5) < 1e-9);
    CHECK(s.tail_bound < 1e-12);
  }
}

TEST_CASE("S sampling rejects models without right transience") {
  Stream rng(8);
  const EnvModel critical = EnvModel::two_point(1.0, 0.5, 0.5);
  CHECK_THROWS_AS(sample_S(critical, rng), NotTransientRight);
  const EnvModel leftward = EnvModel::two_point(0.9, 0.4, 0.7);
  CHECK_THROWS_AS(sample_S(leftward, rng), NotTransientRight);
}

TEST_CASE("S draws stay inside the open unit interval") {
  const EnvModel m = presets::two_point_benchmark();
  Stream rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto s = sample_S(m, rng);
    CHECK(s.s_value > 0.0);
    CHECK(s.s_value < 1.0);
    CHECK(s.truncation_depth >= 50);
  }
}

TEST_CASE("1/S has a power tail with the model's root exponent") {
  // For the mirrored-atom model the tail P(1/S > x) decays like x^(-kappa)
  // with kappa = 0.9 at the benchmark parameter.
  const EnvModel m = presets::temkin_benchmark();
  Stream rng(31337);
  const long long n = 150000;
  std::vector<double> inv_s(static_cast<std::size_t>(n));
  for (auto& x : inv_s) x = 1.0 / sample_S(m, rng).s_value;
  const double grid[] = {100.0, 316.23, 1000.0, 3162.3, 10000.0};
  std::vector<double> lx, lp;
  for (double x : grid) {
    long long c = 0;
    for (double v : inv_s) c += v > x;
    REQUIRE(c > 100);
    lx.push_back(std::log(x));
    lp.push_back(std::log(static_cast<double>(c) / static_cast<double>(n)));
  }
  const double mx = mean(lx), mp = mean(lp);
  double sxx = 0, sxp = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxp += (lx[i] - mx) * (lp[i] - mp);
  }
  const double slope = sxp / sxx;
  CHECK(slope > -1.0);
  CHECK(slope < -0.8);
  // Normalized tail x^0.9 P(1/S > x) sits near its limiting constant.
  long long c1000 = 0;
  for (double v : inv_s) c1000 += v > 1000.0;
  const double scaled =
      std::pow(1000.0, 0.9) * static_cast<double>(c1000) / static_cast<double>(n);
  CHECK(scaled > 8.0);
  CHECK(scaled < 11.5);
}

TEST_CASE("invariant pmf estimates are decreasing and match E[S] at zero") {
  Stream rng(606);
  const EnvModel tp = presets::two_point_benchmark();
  const auto pi = invariant_pmf_mc(tp, 40, 30000, rng);
  REQUIRE(pi.size() == 41);
  CHECK(std::fabs(pi[0] - 0.13674) < 0.003);
  double total = 0.0;
  for (std::size_t u = 0; u < pi.size(); ++u) {
    total += pi[u];
    if (u > 0) CHECK(pi[u] <= pi[u - 1]);
  }
  CHECK(total > 0.5);
  CHECK(total < 1.0);

  Stream rng2(607);
  const auto pi_tk = invariant_pmf_mc(presets::temkin_benchmark(), 5, 30000, rng2);
  CHECK(std::fabs(pi_tk[0] - 0.06811) < 0.003);
}

TEST_CASE("the invariant law is a fixed point of the kernel") {
  // Paired one-sample check of pi Q = pi at v = 0..20: with S fixed,
  // d(v) = sum_u S (1-S)^u Q(u,v) - S (1-S)^v has mean zero.
  const EnvModel m = presets::two_point_benchmark();
  const long long u_max = 600, v_max = 20;
  std::vector<std::vector<double>> q(static_cast<std::size_t>(u_max) + 1);
  for (long long u = 0; u <= u_max; ++u) {
    auto& qu = q[static_cast<std::size_t>(u)];
    qu.resize(static_cast<std::size_t>(v_max) + 1);
    for (long long v = 0; v <= v_max; ++v)
      qu[static_cast<std::size_t>(v)] = std::exp(log_q(m, u, v));
  }
  const long long n = 10000;
  std::vector<double> dsum(static_cast<std::size_t>(v_max) + 1, 0.0);
  std::vector<double> dsq(static_cast<std::size_t>(v_max) + 1, 0.0);
  Stream rng(909);
  std::vector<double> pw(static_cast<std::size_t>(u_max) + 1);
  for (long long j = 0; j < n; ++j) {
    const double s = sample_S(m, rng).s_value;
    const double x = 1.0 - s;
    pw[0] = s;
    for (long long u = 1; u <= u_max; ++u)
      pw[static_cast<std::size_t>(u)] = pw[static_cast<std::size_t>(u) - 1] * x;
    for (long long v = 0; v <= v_max; ++v) {
      double lhs = 0.0;
      for (long long u = 0; u <= u_max; ++u)
        lhs += pw[static_cast<std::size_t>(u)] *
               q[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      const double d = lhs - pw[static_cast<std::size_t>(v)];
      dsum[static_cast<std::size_t>(v)] += d;
      dsq[static_cast<std::size_t>(v)] += d * d;
    }
  }
  for (long long v = 0; v <= v_max; ++v) {
    const double md = dsum[static_cast<std::size_t>(v)] / static_cast<double>(n);
    const double var =
        (dsq[static_cast<std::size_t>(v)] -
         static_cast<double>(n) * md * md) /
        static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::fabs(md) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("long chain runs spend the invariant fraction of time at zero") {
  const EnvModel m = presets::two_point_benchmark();
  Stream rng(2718);
  const long long burn = 10000, keep = 1000000;
  const auto z = simulate_chain(m, burn + keep, rng);
  const long long batches = 200, width = keep / batches;
  std::vector<double> freq;
  for (long long b = 0; b < batches; ++b) {
    long long zeros = 0;
    for (long long k = 0; k < width; ++k)
      zeros += z[static_cast<std::size_t>(burn + b * width + k)] == 0;
    freq.push_back(static_cast<double>(zeros) / static_cast<double>(width));
  }
  const double f = mean(freq);
  const double se = sample_sd(freq) / std::sqrt(static_cast<double>(batches));
  CHECK(std::fabs(f - 0.13674) < std::max(4.0 * se, 0.004));
}

TEST_CASE("hitting times match the chain-sum construction in law") {
  // T_n = n + 2 * (Z_1 + ... + Z_n) when the left-step counts follow the
  // chain; compares full distributions, not just a one-step marginal.
  const EnvModel m = presets::two_point_benchmark();
  const long long n = 300;
  std::vector<double> walk_t, chain_t;
  for (int rep = 0; rep < 400; ++rep) {
    Walker w(QuenchedEnv(m, derive_seed(811, rep)), derive_seed(812, rep));
    if (w.run_until(n, 30000000))
      walk_t.push_back(static_cast<double>(w.total_steps()));
  }
  Stream rng(813);
  for (int rep = 0; rep < 400; ++rep) {
    long long z = 0;
    unsigned long long sum = 0;
    for (long long k = 0; k < n; ++k) {
      z = step_z(m, z, rng);
      sum += static_cast<unsigned long long>(z);
    }
    chain_t.push_back(static_cast<double>(n + 2 * sum));
  }
  REQUIRE(walk_t.size() == 400);
  REQUIRE(chain_t.size() == 400);
  CHECK(ks_two_sample_pvalue(walk_t, chain_t) > 0.01);
}

TEST_CASE("truncated moments separate summable from divergent exponents") {
  // Below the tail exponent the series settles; above it the partial sums
  // keep growing with the cutoff.
  const EnvModel m = presets::two_point_benchmark();
  const long long n_env = 12000;
  auto ratio = [&](double alpha) {
    Stream r1(derive_seed(4242, 1));
    const double low = truncated_moment(m, alpha, 1000, n_env, r1);
    Stream r2(derive_seed(4242, 1));  // same S draws for both cutoffs
    const double high = truncated_moment(m, alpha, 10000, n_env, r2);
    REQUIRE(low > 0.0);
    return high / low;
  };
  const double conv = ratio(0.45);
  CHECK(conv > 1.00);
  CHECK(conv < 1.25);
  const double div = ratio(1.0);
  CHECK(div > 1.3);
  CHECK(div > conv + 0.2);
}
