#pragma once

namespace rwre {

// log(exp(a) + exp(b)) without overflow; handles -inf arguments.
double log_sum_exp(double a, double b);

// log C(n, k) for real n >= k >= 0 via lgamma.
double log_binomial(double n, double k);

// Derivatives of lgamma; x > 0. Accurate to ~1e-13 relative.
double digamma(double x);
double trigamma(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a),
// a > 0, x >= 0. Series for x < a+1, continued fraction otherwise.
double reg_gamma_q(double a, double x);

// Standard normal CDF and its inverse (quantile), p in (0,1).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace rwre
