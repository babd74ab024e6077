#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwre/bpire.hpp"
#include "rwre/errors.hpp"
#include "rwre/harness.hpp"
#include "rwre/moment_est.hpp"
#include "rwre/presets.hpp"
#include "rwre/stats.hpp"
#include "rwre/walk_sim.hpp"

namespace {

using namespace rwre;

struct ModelFlags {
  std::string preset;
  std::string family;
  double p = 0, a1 = 0, a2 = 0, a = 0, alpha = 0, beta = 0;
  std::vector<double> p_box, a_box, alpha_box, beta_box;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset,
                    "benchmark model: two_point, temkin or beta");
    app->add_option("--family", family, "two_point, beta or temkin");
    app->add_option("--p", p, "atom weight (two_point: parameter; temkin: fixed)");
    app->add_option("--a1", a1, "two_point lower atom");
    app->add_option("--a2", a2, "two_point upper atom");
    app->add_option("--a", a, "temkin parameter");
    app->add_option("--alpha", alpha, "beta shape alpha");
    app->add_option("--beta", beta, "beta shape beta");
    app->add_option("--p-box", p_box, "box lo hi")->expected(2);
    app->add_option("--a-box", a_box, "box lo hi")->expected(2);
    app->add_option("--alpha-box", alpha_box, "box lo hi")->expected(2);
    app->add_option("--beta-box", beta_box, "box lo hi")->expected(2);
  }

  EnvModel build() const {
    if (!preset.empty()) {
      if (preset == "two_point") return presets::two_point_benchmark();
      if (preset == "temkin") return presets::temkin_benchmark();
      if (preset == "beta") return presets::beta_benchmark();
      throw ConfigError("unknown preset: " + preset);
    }
    if (family.empty())
      throw ConfigError("give either --preset or --family with parameters");
    switch (family_from_name(family)) {
      case Family::two_point:
        return EnvModel::two_point(
            p, a1, a2,
            p_box.empty() ? Bounds{0.01, 0.99} : Bounds{p_box[0], p_box[1]});
      case Family::beta:
        if (alpha_box.empty() || beta_box.empty())
          throw ConfigError("beta family needs --alpha-box and --beta-box");
        return EnvModel::beta(alpha, beta, {alpha_box[0], alpha_box[1]},
                              {beta_box[0], beta_box[1]});
      case Family::temkin:
        return a_box.empty()
                   ? EnvModel::temkin(a, p)
                   : EnvModel::temkin(a, p, {a_box[0], a_box[1]});
    }
    throw ConfigError("unreachable family");
  }
};

std::string fmt_theta(const std::vector<double>& th) {
  std::string s;
  for (std::size_t i = 0; i < th.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", th[i]);
    s += buf;
  }
  return s;
}

int cmd_kappa(const ModelFlags& mf) {
  const EnvModel m = mf.build();
  std::printf("family        %s\n", family_name(m.family()).c_str());
  std::printf("theta         %s\n", fmt_theta(m.theta()).c_str());
  std::printf("E[log rho]    %.10g\n", m.e_log_rho());
  std::printf("E[rho]        %.10g\n", m.moment_rho(1.0));
  switch (m.classify_regime()) {
    case Regime::not_transient_right:
      std::printf("regime        not transient to the right\n");
      return 0;
    case Regime::ballistic:
      std::printf("regime        ballistic (positive speed)\n");
      break;
    case Regime::sub_ballistic:
      std::printf("regime        sub-ballistic (zero speed)\n");
      break;
  }
  const double kappa = m.solve_kappa();
  std::printf("kappa         %.10g\n", kappa);
  if (std::isfinite(kappa))
    std::printf("default t_max for n=1000: %llu\n",
                static_cast<unsigned long long>(default_t_max(1000, kappa)));
  return 0;
}

int cmd_simulate(const ModelFlags& mf, long long n, std::uint64_t t_max,
                 double factor, std::uint64_t env_seed,
                 std::uint64_t walk_seed, const std::string& dump) {
  const EnvModel m = mf.build();
  if (t_max == 0) t_max = default_t_max(n, m.solve_kappa(), factor);
  const WalkOutcome o = run_to_hitting(m, env_seed, n, t_max, walk_seed);
  std::printf("n            %lld\n", o.n);
  std::printf("hit          %s\n", o.hit ? "true" : "false");
  std::printf("total_steps  %llu (cap %llu)\n",
              static_cast<unsigned long long>(o.total_steps),
              static_cast<unsigned long long>(t_max));
  if (o.hit) {
    std::uint64_t left = 0;
    for (auto c : o.left_counts) left += c;
    std::printf("left steps   %llu\n", static_cast<unsigned long long>(left));
    std::printf("v_hat        %.10g\n", v_hat(o));
  }
  if (!dump.empty()) {
    std::string csv = "site,left_count\n";
    for (std::size_t x = 0; x < o.left_counts.size(); ++x)
      csv += std::to_string(x) + "," + std::to_string(o.left_counts[x]) + "\n";
    write_file(dump, csv);
    std::printf("left-count profile written to %s\n", dump.c_str());
  }
  return 0;
}

int cmd_estimate(const ModelFlags& mf, long long n, std::uint64_t t_max,
                 double factor, std::uint64_t env_seed,
                 std::uint64_t walk_seed, double level) {
  const EnvModel m = mf.build();
  if (t_max == 0) t_max = default_t_max(n, m.solve_kappa(), factor);
  const WalkOutcome o = run_to_hitting(m, env_seed, n, t_max, walk_seed);
  if (!o.hit) {
    std::printf("walk censored at %llu steps; no estimate\n",
                static_cast<unsigned long long>(o.total_steps));
    return 3;
  }
  const auto data = LeftStepData::from_outcome(o);
  const auto est = estimate_full(data, m, {}, level);
  std::printf("theta*       %s\n", fmt_theta(m.theta()).c_str());
  std::printf("theta_mle    %s%s\n", fmt_theta(est.theta_hat).c_str(),
              est.converged ? "" : "  (optimizer hit its budget)");
  if (est.sigma.dim == 1)
    std::printf("sigma_hat    %.10g\n", est.sigma.at(0, 0));
  else
    std::printf("sigma_hat    [%.10g, %.10g; %.10g, %.10g]\n",
                est.sigma.at(0, 0), est.sigma.at(0, 1), est.sigma.at(1, 0),
                est.sigma.at(1, 1));
  for (std::size_t i = 0; i < est.ci.size(); ++i)
    std::printf("ci[%zu]        [%.10g, %.10g]  level %.3g\n", i,
                est.ci[i].lo, est.ci[i].hi, level);
  if (m.family() != Family::beta) {
    const auto me = moment_estimate(o, m);
    std::printf("theta_mom    %.10g%s  (v_hat %.6g)\n", me.theta,
                me.clipped ? " [clipped]" : "", me.v);
  }
  return 0;
}

int cmd_experiment(const std::string& config, const std::string& preset,
                   const std::string& out_dir, std::uint64_t seed,
                   long long replicates, std::vector<long long> n_list,
                   int threads, bool fresh, double level) {
  ExperimentSpec spec = [&] {
    if (!config.empty()) return parse_spec_file(config);
    if (preset == "two_point") return presets::two_point_experiment();
    if (preset == "temkin") return presets::temkin_experiment();
    throw ConfigError("give --config FILE or --preset two_point|temkin");
  }();
  if (seed != 0) spec.seed = seed;
  if (replicates != 0) spec.replicates = replicates;
  if (!n_list.empty()) spec.n_list = n_list;
  if (threads != 0) spec.threads = threads;
  if (fresh) spec.fresh_walk_per_n = true;
  if (level >= 0.0) spec.level = level;
  spec.validate();

  std::filesystem::create_directories(out_dir);
  const auto records = run_experiment(spec);
  write_file(out_dir + "/records.csv", emit_records_csv(records));
  const auto rows = summarize(records);
  write_file(out_dir + "/summary.csv", emit_summary_csv(rows));
  write_file(out_dir + "/boxplot.svg",
             emit_boxplot_svg(rows, {{spec.example, spec.model.theta()[0]}}));
  std::string diag_text;
  try {
    diag_text = diagnostics(records, spec).to_text();
  } catch (const InsufficientData& e) {
    diag_text = std::string("diagnostics unavailable: ") + e.what() + "\n";
  }
  write_file(out_dir + "/diagnostics.txt", diag_text);
  std::printf("%s", diag_text.c_str());
  std::printf("outputs written to %s\n", out_dir.c_str());
  return 0;
}

// Light oracle battery; the heavyweight version lives in the test suite.
int cmd_bpire_check() {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
  };

  for (const auto& m : {presets::two_point_benchmark(),
                        presets::temkin_benchmark(),
                        presets::beta_benchmark()}) {
    double worst = 0.0;
    for (long long u = 0; u <= 10; ++u) {
      const auto row = kernel_row(m, u, 1e-10);
      double sum = 0.0;
      for (double q : row) sum += q;
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
    report(("kernel rows normalize, " + family_name(m.family())).c_str(),
           worst < 1e-8, "max |sum-1| = " + std::to_string(worst));
  }

  {
    const EnvModel m = presets::two_point_benchmark();
    Stream rng(91);
    const auto row = kernel_row(m, 0, 1e-12);
    std::vector<long long> counts(row.size(), 0);
    const long long draws = 20000;
    for (long long i = 0; i < draws; ++i) {
      const auto z = step_z(m, 0, rng);
      if (z < static_cast<long long>(counts.size()))
        ++counts[static_cast<std::size_t>(z)];
    }
    const auto gof = chi_square_pmf(counts, row, draws);
    report("chain step matches kernel row", gof.pvalue > 0.01,
           "chi2 p = " + std::to_string(gof.pvalue));
  }

  {
    const EnvModel m = presets::temkin_benchmark();
    Stream rng(92);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double s = sample_S(m, rng).s_value;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    report("S samples stay inside (0,1)", lo > 0.0 && hi < 1.0,
           "range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random walks in random environments: simulation and fitting"};
  app.require_subcommand(1);

  ModelFlags mf_kappa, mf_sim, mf_est;

  auto* kappa = app.add_subcommand("kappa", "regime report for a model");
  mf_kappa.attach(kappa);

  long long n = 1000;
  std::uint64_t t_max = 0, env_seed = 1, walk_seed = 2;
  double factor = 500.0;
  std::string dump;
  auto* sim = app.add_subcommand("simulate", "run one walk to its hitting time");
  mf_sim.attach(sim);
  sim->add_option("--n", n, "hitting level");
  sim->add_option("--t-max", t_max, "step cap, 0 = default rule");
  sim->add_option("--t-max-factor", factor, "factor in the default cap rule");
  sim->add_option("--env-seed", env_seed, "environment seed");
  sim->add_option("--walk-seed", walk_seed, "walk seed");
  sim->add_option("--dump", dump, "write per-site left counts to this CSV");

  long long n_est = 1000;
  std::uint64_t t_max_est = 0, env_seed_est = 1, walk_seed_est = 2;
  double factor_est = 500.0, level_est = 0.95;
  auto* est = app.add_subcommand("estimate", "fit one simulated dataset");
  mf_est.attach(est);
  est->add_option("--n", n_est, "hitting level");
  est->add_option("--t-max", t_max_est, "step cap, 0 = default rule");
  est->add_option("--t-max-factor", factor_est, "factor in the default cap rule");
  est->add_option("--env-seed", env_seed_est, "environment seed");
  est->add_option("--walk-seed", walk_seed_est, "walk seed");
  est->add_option("--level", level_est, "confidence level");

  std::string config, preset_exp, out_dir = "out";
  std::uint64_t seed = 0;
  long long replicates = 0;
  std::vector<long long> n_list;
  int threads = 0;
  bool fresh = false;
  double level = -1.0;
  auto* exp = app.add_subcommand("experiment",
                                 "replicate study from a spec file");
  exp->add_option("--config", config, "spec file path");
  exp->add_option("--preset", preset_exp, "two_point or temkin benchmark");
  exp->add_option("--out-dir", out_dir, "output directory");
  exp->add_option("--seed", seed, "master seed override");
  exp->add_option("--replicates", replicates, "replicate count override");
  exp->add_option("--n-list", n_list, "hitting levels override")
      ->expected(-1);
  exp->add_option("--threads", threads, "worker threads, 0 = hardware");
  exp->add_flag("--fresh-walk-per-n", fresh,
                "independent walk per n instead of continuation");
  exp->add_option("--level", level, "confidence level override");

  auto* oracle = app.add_subcommand("bpire-check",
                                    "quick distributional oracle battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kappa->parsed()) return cmd_kappa(mf_kappa);
    if (sim->parsed())
      return cmd_simulate(mf_sim, n, t_max, factor, env_seed, walk_seed, dump);
    if (est->parsed())
      return cmd_estimate(mf_est, n_est, t_max_est, factor_est, env_seed_est,
                          walk_seed_est, level_est);
    if (exp->parsed())
      return cmd_experiment(config, preset_exp, out_dir, seed, replicates,
                            n_list, threads, fresh, level);
    if (oracle->parsed()) return cmd_bpire_check();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
