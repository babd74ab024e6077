#pragma once

#include <cstdint>
#include <vector>

namespace rwre {

// Linear-interpolation quantile on a sorted vector: h = (N-1)p, result
// v[floor h] + frac(h) * (v[floor h + 1] - v[floor h]). N >= 1, p in [0,1].
double quantile_sorted(const std::vector<double>& sorted, double p);

struct FiveNumber {
  double q1 = 0, median = 0, q3 = 0, iqr = 0;
  double whisker_lo = 0, whisker_hi = 0;  // data extremes within 1.5 IQR
  long long outliers = 0;                 // points beyond the whiskers
  long long count = 0;
};

// Sorts a copy. Throws EmptyCell when values is empty.
FiveNumber five_number(std::vector<double> values);

// Kolmogorov-Smirnov asymptotic tail: P(D > d) with Stephens' finite-n
// adjustment, for a one-sample statistic d from n observations.
double ks_pvalue(double d, long long n);

// One-sample KS statistic against the standard normal CDF. Sorts a copy.
double ks_stat_normal(std::vector<double> values);

// Two-sample KS: returns p-value for samples a and b (effective size rule
// n_e = na*nb/(na+nb)). Sorts copies.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

struct ChiSquare {
  double stat = 0;
  long long dof = 0;
  double pvalue = 1;
};

// Goodness of fit of integer-valued samples against a pmf over {0,1,2,...}.
// pmf[k] is the probability of value k; remaining mass is the tail bin.
// Consecutive values are merged left to right until each bin's expected
// count is at least min_expected. n = counts total.
ChiSquare chi_square_pmf(const std::vector<long long>& value_counts,
                         const std::vector<double>& pmf, double total_draws,
                         double min_expected = 5.0);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);  // n-1 denominator

}  // namespace rwre
