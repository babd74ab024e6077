#include "rwre/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rwre/errors.hpp"
#include "rwre/special.hpp"

namespace rwre {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw EmptyCell("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

FiveNumber five_number(std::vector<double> values) {
  if (values.empty()) throw EmptyCell("five_number of empty sample");
  std::sort(values.begin(), values.end());
  FiveNumber f;
  f.count = static_cast<long long>(values.size());
  f.q1 = quantile_sorted(values, 0.25);
  f.median = quantile_sorted(values, 0.5);
  f.q3 = quantile_sorted(values, 0.75);
  f.iqr = f.q3 - f.q1;
  const double lo_fence = f.q1 - 1.5 * f.iqr;
  const double hi_fence = f.q3 + 1.5 * f.iqr;
  f.whisker_lo = f.q1;
  f.whisker_hi = f.q3;
  for (double v : values) {
    if (v >= lo_fence) {
      f.whisker_lo = v;  // first value inside the fence (sorted order)
      break;
    }
  }
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it <= hi_fence) {
      f.whisker_hi = *it;
      break;
    }
  }
  for (double v : values)
    if (v < lo_fence || v > hi_fence) ++f.outliers;
  return f;
}

double ks_pvalue(double d, long long n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * lambda * lambda * j * j);
    sum += sign * term;
    if (term < 1e-12 * std::fabs(sum) || term < 1e-300) break;
    sign = -sign;
  }
  const double p = 2.0 * sum;
  return std::min(1.0, std::max(0.0, p));
}

double ks_stat_normal(std::vector<double> values) {
  if (values.empty()) throw EmptyCell("ks of empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
  }
  return d;
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyCell("ks of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  // Reuse the one-sample tail with the effective size.
  const double rn = std::sqrt(ne);
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    if (term < 1e-12 * std::fabs(sum) || term < 1e-300) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

ChiSquare chi_square_pmf(const std::vector<long long>& value_counts,
                         const std::vector<double>& pmf, double total_draws,
                         double min_expected) {
  // Accumulate bins left to right; the closing bin absorbs the pmf tail
  // beyond the supplied values plus any observed counts past the table.
  std::vector<double> obs_bins, exp_bins;
  double obs_acc = 0.0, exp_acc = 0.0;
  const std::size_t m = std::max(value_counts.size(), pmf.size());
  double pmf_mass = 0.0;
  for (double q : pmf) pmf_mass += q;
  double obs_total = 0.0;
  for (long long c : value_counts) obs_total += static_cast<double>(c);

  for (std::size_t k = 0; k < m; ++k) {
    obs_acc += k < value_counts.size() ? static_cast<double>(value_counts[k]) : 0.0;
    exp_acc += (k < pmf.size() ? pmf[k] : 0.0) * total_draws;
    if (exp_acc >= min_expected) {
      obs_bins.push_back(obs_acc);
      exp_bins.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  // Tail bin: mass not covered by the pmf table plus leftovers.
  obs_acc += total_draws - obs_total;  // observed values beyond the table
  exp_acc += (1.0 - pmf_mass) * total_draws;
  if (!obs_bins.empty() && exp_acc < min_expected) {
    obs_bins.back() += obs_acc;
    exp_bins.back() += exp_acc;
  } else {
    obs_bins.push_back(obs_acc);
    exp_bins.push_back(exp_acc);
  }

  ChiSquare r;
  if (obs_bins.size() < 2) {
    r.dof = 0;
    r.pvalue = 1.0;
    return r;
  }
  for (std::size_t i = 0; i < obs_bins.size(); ++i) {
    const double diff = obs_bins[i] - exp_bins[i];
    r.stat += diff * diff / exp_bins[i];
  }
  r.dof = static_cast<long long>(obs_bins.size()) - 1;
  r.pvalue = reg_gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.stat);
  return r;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw EmptyCell("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) throw EmptyCell("sd needs two points");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace rwre
