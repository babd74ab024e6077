#include "rwre/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rwre/errors.hpp"
#include "rwre/moment_est.hpp"
#include "rwre/stats.hpp"
#include "rwre/walk_sim.hpp"

namespace rwre {

namespace {

// Fill estimate fields of a non-censored record from one stopped walk.
void attach_estimates(ReplicateRecord& rec, const WalkOutcome& outcome,
                      const ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto data = LeftStepData::from_outcome(outcome);
  const auto est = estimate_full(data, spec.model, spec.theta0, spec.level);
  rec.theta_mle = est.theta_hat;
  if (est.sigma.dim == 1) {
    rec.sigma = {est.sigma.at(0, 0)};
  } else {
    rec.sigma = {est.sigma.at(0, 0), est.sigma.at(0, 1), est.sigma.at(1, 1)};
  }
  for (const auto& b : est.ci) {
    rec.ci_lo.push_back(b.lo);
    rec.ci_hi.push_back(b.hi);
  }
  if (spec.model.family() != Family::beta) {
    const auto me = moment_estimate(outcome, spec.model);
    rec.theta_mom = me.theta;
    rec.clipped_mom = me.clipped;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
}

std::vector<ReplicateRecord> run_replicate(const ExperimentSpec& spec,
                                           long long rep,
                                           std::uint64_t cap) {
  std::vector<ReplicateRecord> out;
  out.reserve(spec.n_list.size());
  const std::uint64_t env_seed = derive_seed(spec.seed, rep, 1);
  const std::uint64_t base_walk_seed = derive_seed(spec.seed, rep, 2);

  Walker walker(QuenchedEnv(spec.model, env_seed), base_walk_seed);
  bool capped = false;
  for (std::size_t k = 0; k < spec.n_list.size(); ++k) {
    const long long n = spec.n_list[k];
    ReplicateRecord rec;
    rec.example = spec.example;
    rec.n = n;
    rec.replicate = rep;
    rec.env_seed = env_seed;

    if (spec.fresh_walk_per_n) {
      rec.walk_seed = derive_seed(spec.seed, rep, 3 + k);
      Walker fresh(QuenchedEnv(spec.model, env_seed), rec.walk_seed);
      const bool hit = fresh.run_until(n, cap);
      rec.total_steps = fresh.total_steps();
      rec.censored = !hit;
      if (hit) {
        try {
          attach_estimates(rec, fresh.outcome(n), spec);
        } catch (const std::exception&) {
          rec.theta_mle.clear();  // failure recorded as a bare row
        }
      }
    } else {
      rec.walk_seed = base_walk_seed;
      // Once the shared path is capped every larger n is censored too.
      const bool hit = capped ? false : walker.run_until(n, cap);
      capped = capped || !hit;
      rec.total_steps = walker.total_steps();
      rec.censored = !hit;
      if (hit) {
        try {
          attach_estimates(rec, walker.outcome(n), spec);
        } catch (const std::exception&) {
          rec.theta_mle.clear();
        }
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<ReplicateRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::uint64_t cap = spec.step_cap();
  const long long reps = spec.replicates;
  std::vector<std::vector<ReplicateRecord>> slots(
      static_cast<std::size_t>(reps));

  unsigned workers = spec.threads > 0
                         ? static_cast<unsigned>(spec.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));

  std::atomic<long long> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto body = [&] {
    for (;;) {
      const long long rep = next.fetch_add(1);
      if (rep >= reps) return;
      try {
        slots[static_cast<std::size_t>(rep)] = run_replicate(spec, rep, cap);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Merge in (n, replicate) order: scheduling cannot affect the output.
  std::vector<ReplicateRecord> records;
  records.reserve(static_cast<std::size_t>(reps) * spec.n_list.size());
  for (std::size_t k = 0; k < spec.n_list.size(); ++k)
    for (long long rep = 0; rep < reps; ++rep)
      records.push_back(slots[static_cast<std::size_t>(rep)][k]);
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<ReplicateRecord>& records) {
  // Group by (example, n) preserving first-appearance order.
  std::vector<std::pair<std::string, long long>> cells;
  for (const auto& r : records) {
    const std::pair<std::string, long long> key{r.example, r.n};
    if (std::find(cells.begin(), cells.end(), key) == cells.end())
      cells.push_back(key);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [example, n] : cells) {
    long long total = 0, censored = 0;
    std::vector<double> mle, mom;
    for (const auto& r : records) {
      if (r.example != example || r.n != n) continue;
      ++total;
      if (r.censored) {
        ++censored;
        continue;
      }
      if (!r.theta_mle.empty()) mle.push_back(r.theta_mle[0]);
      if (r.theta_mom) mom.push_back(*r.theta_mom);
    }
    if (censored == total)
      throw EmptyCell("every replicate censored for n = " + std::to_string(n));
    const double cfrac =
        static_cast<double>(censored) / static_cast<double>(total);
    auto push = [&](const std::string& est, const std::vector<double>& vals) {
      if (vals.empty()) return;  // estimator not defined for this family
      const FiveNumber f = five_number(vals);
      SummaryRow row;
      row.example = example;
      row.n = n;
      row.estimator = est;
      row.count = f.count;
      row.censored_frac = cfrac;
      row.q1 = f.q1;
      row.median = f.median;
      row.q3 = f.q3;
      row.iqr = f.iqr;
      row.outliers = f.outliers;
      row.whisker_lo = f.whisker_lo;
      row.whisker_hi = f.whisker_hi;
      rows.push_back(std::move(row));
    };
    push("mle", mle);
    push("moment", mom);
  }
  return rows;
}

DiagnosticsReport diagnostics_from_standardized(std::vector<double> z) {
  if (z.size() < 100)
    throw InsufficientData("need at least 100 standardized values");
  DiagnosticsReport rep;
  rep.count = static_cast<long long>(z.size());
  rep.ks_stat = ks_stat_normal(z);
  rep.ks_pvalue = ks_pvalue(rep.ks_stat, rep.count);
  return rep;
}

DiagnosticsReport diagnostics(const std::vector<ReplicateRecord>& records,
                              const ExperimentSpec& spec) {
  const long long n_max = spec.n_list.back();
  const auto theta_star = spec.model.theta();
  const int dim = spec.model.dim();

  std::vector<double> standardized;
  long long count = 0, with_ci = 0, covered = 0;
  for (const auto& r : records) {
    if (r.n != n_max || r.censored || r.theta_mle.empty()) continue;
    ++count;
    // Per-coordinate studentization from the packed information estimate:
    // sqrt(n) (theta_i - theta*_i) / sqrt(inv(Sigma)_ii).
    Matrix2 sigma;
    sigma.dim = dim;
    if (dim == 1) {
      sigma.m[0][0] = r.sigma.empty() ? 0.0 : r.sigma[0];
    } else if (r.sigma.size() == 3) {
      sigma.m[0][0] = r.sigma[0];
      sigma.m[0][1] = sigma.m[1][0] = r.sigma[1];
      sigma.m[1][1] = r.sigma[2];
    }
    if (sigma.positive_definite()) {
      const Matrix2 inv = sigma.inverse();
      const double rn = std::sqrt(static_cast<double>(n_max));
      for (int i = 0; i < dim; ++i)
        standardized.push_back(rn * (r.theta_mle[i] - theta_star[i]) /
                               std::sqrt(inv.at(i, i)));
    }
    if (!r.ci_lo.empty()) {
      ++with_ci;
      bool all_in = true;
      for (int i = 0; i < dim; ++i)
        if (theta_star[i] < r.ci_lo[i] || theta_star[i] > r.ci_hi[i])
          all_in = false;
      if (all_in) ++covered;
    }
  }
  if (count < 100)
    throw InsufficientData("need at least 100 non-censored replicates at n = " +
                           std::to_string(n_max));

  DiagnosticsReport rep;
  rep.n_used = n_max;
  rep.count = count;
  rep.ks_stat = ks_stat_normal(standardized);
  rep.ks_pvalue =
      ks_pvalue(rep.ks_stat, static_cast<long long>(standardized.size()));
  rep.with_ci = with_ci;
  rep.covered = covered;
  rep.coverage = with_ci > 0
                     ? static_cast<double>(covered) / static_cast<double>(with_ci)
                     : 0.0;

  if (spec.model.family() == Family::temkin) {
    rep.has_sigma_trend = true;
    for (long long n : spec.n_list) {
      std::vector<double> sig;
      for (const auto& r : records)
        if (r.n == n && !r.censored && !r.sigma.empty())
          sig.push_back(r.sigma[0]);
      if (!sig.empty()) {
        std::sort(sig.begin(), sig.end());
        rep.median_sigma.emplace_back(n, quantile_sorted(sig, 0.5));
      }
    }
    rep.sigma_increasing = rep.median_sigma.size() >= 2;
    for (std::size_t i = 1; i < rep.median_sigma.size(); ++i)
      if (rep.median_sigma[i].second <= rep.median_sigma[i - 1].second)
        rep.sigma_increasing = false;
  }
  return rep;
}

std::string DiagnosticsReport::to_text() const {
  std::string s;
  s += "diagnostics at n = " + std::to_string(n_used) + "\n";
  s += "  non-censored records: " + std::to_string(count) + "\n";
  s += "  KS vs standard normal: stat = " + std::to_string(ks_stat) +
       ", p = " + std::to_string(ks_pvalue) + "\n";
  s += "  CI coverage: " + std::to_string(covered) + "/" +
       std::to_string(with_ci) + " = " + std::to_string(coverage) + "\n";
  if (has_sigma_trend) {
    s += "  median information vs n:";
    for (const auto& [n, m] : median_sigma)
      s += " (" + std::to_string(n) + ", " + std::to_string(m) + ")";
    s += sigma_increasing ? "  [strictly increasing]\n"
                          : "  [not monotone]\n";
  }
  return s;
}

}  // namespace rwre
