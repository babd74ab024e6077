#include "rwre/bpire.hpp"

#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"
#include "rwre/special.hpp"

namespace rwre {

double log_q(const EnvModel& model, long long u, long long v) {
  if (u < 0 || v < 0) throw std::invalid_argument("log_q needs u, v >= 0");
  const auto du = static_cast<double>(u);
  const auto dv = static_cast<double>(v);
  return log_binomial(du + dv, dv) + model.log_phi(du, dv);
}

namespace {

// Row recursion for a single atom (site value a, log-weight lw):
//   K(u, 0) = w a^(u+1),   K(u, v+1)/K(u, v) = (u+v+1)/(v+1) * (1-a).
// The ratio decreases in v, so once it is below 1 the remaining tail is
// bounded by the geometric series K(u,v) r/(1-r).
struct AtomRow {
  double a = 0, value = 0;
  void init(double a_in, double lw, long long u) {
    a = a_in;
    value = std::exp(lw + (static_cast<double>(u) + 1.0) * std::log(a));
  }
  double ratio(long long u, long long v) const {
    return (static_cast<double>(u + v + 1) / static_cast<double>(v + 1)) *
           (1.0 - a);
  }
  void advance(long long u, long long v) { value *= ratio(u, v); }
  double tail_bound(long long u, long long v) const {
    const double r = ratio(u, v);
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return value * r / (1.0 - r);
  }
};

std::vector<double> kernel_row_atoms(double a1, double lw1, double a2,
                                     double lw2, long long u,
                                     double tail_tol) {
  AtomRow r1, r2;
  r1.init(a1, lw1, u);
  r2.init(a2, lw2, u);
  std::vector<double> row;
  for (long long v = 0;; ++v) {
    row.push_back(r1.value + r2.value);
    if (r1.tail_bound(u, v) + r2.tail_bound(u, v) < tail_tol) break;
    if (v > 100'000'000)
      throw TruncationFailure("kernel row did not reach its tail bound");
    r1.advance(u, v);
    r2.advance(u, v);
  }
  return row;
}

// Certified tail of the beta-mixture row past V (V >= 1):
//   sum_{v >= V} Q(u, v) <= A * G * (V - 1 + beta)^(-alpha) / alpha
// with A = Gamma(u+1+alpha) e^{(u+1+alpha)/(2(V+beta))} / (u! B(alpha,beta))
// and G = (1 + max(0, u - beta)/(V + beta))^u, from C(u+v,v) <= (v+u)^u/u!
// and Gamma(x)/Gamma(x+s) <= x^(-s) e^{s/(2x)}.
double beta_row_tail_log(double alpha, double beta, double lbeta, long long u,
                         long long V) {
  const double du = static_cast<double>(u);
  const double dV = static_cast<double>(V);
  const double s = du + 1.0 + alpha;
  const double log_a =
      std::lgamma(s) - std::lgamma(du + 1.0) - lbeta + s / (2.0 * (dV + beta));
  const double log_g =
      du * std::log1p(std::max(0.0, du - beta) / (dV + beta));
  return log_a + log_g - alpha * std::log(dV - 1.0 + beta) - std::log(alpha);
}

std::vector<double> kernel_row_beta(const EnvModel& model, long long u,
                                    double tail_tol) {
  const double alpha = model.theta()[0];
  const double beta = model.theta()[1];
  const double lbeta = std::lgamma(alpha) + std::lgamma(beta) -
                       std::lgamma(alpha + beta);
  long long V = 4 * (u + 1);
  while (beta_row_tail_log(alpha, beta, lbeta, u, V) >= std::log(tail_tol)) {
    V *= 2;
    if (V > 2'000'000'000LL)
      throw TruncationFailure("beta kernel row tail will not certify");
  }
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(V) + 1);
  // Exact ratio Q(u,v+1)/Q(u,v) = (u+v+1)(v+beta) / ((v+1)(u+1+alpha+v+beta)).
  double q = std::exp(log_q(model, u, 0));
  const double du = static_cast<double>(u);
  for (long long v = 0; v < V; ++v) {
    row.push_back(q);
    const double dv = static_cast<double>(v);
    q *= (du + dv + 1.0) * (dv + beta) /
         ((dv + 1.0) * (du + 1.0 + alpha + dv + beta));
  }
  row.push_back(q);
  return row;
}

}  // namespace

std::vector<double> kernel_row(const EnvModel& model, long long u,
                               double tail_tol) {
  if (u < 0) throw std::invalid_argument("kernel_row needs u >= 0");
  switch (model.family()) {
    case Family::two_point: {
      const double p = model.theta()[0];
      return kernel_row_atoms(model.fixed_a1(), std::log(p),
                              model.fixed_a2(), std::log1p(-p), u, tail_tol);
    }
    case Family::temkin: {
      const double a = model.theta()[0];
      const double p = model.fixed_p();
      return kernel_row_atoms(a, std::log(p), 1.0 - a, std::log1p(-p), u,
                              tail_tol);
    }
    case Family::beta:
      return kernel_row_beta(model, u, tail_tol);
  }
  return {};
}

long long step_z_given_omega(double omega, long long z, Stream& rng) {
  if (!(omega > 0.0 && omega <= 1.0))
    throw std::invalid_argument("omega must lie in (0,1]");
  long long total = 0;
  for (long long i = 0; i <= z; ++i) total += rng.geometric(omega);
  return total;
}

long long step_z(const EnvModel& model, long long z, Stream& rng) {
  return step_z_given_omega(model.sample_omega(rng), z, rng);
}

std::vector<long long> simulate_chain(const EnvModel& model, long long length,
                                      Stream& rng) {
  std::vector<long long> z(static_cast<std::size_t>(length) + 1, 0);
  for (long long k = 0; k < length; ++k)
    z[static_cast<std::size_t>(k) + 1] =
        step_z(model, z[static_cast<std::size_t>(k)], rng);
  return z;
}

SSample sample_S(const EnvModel& model, Stream& rng, double tol) {
  if (model.classify_regime() == Regime::not_transient_right)
    throw NotTransientRight("S diverges unless E[log rho] < 0");
  double sum = 1.0, prod = 1.0;
  long long depth = 0;
  auto step = [&] {
    const double w = model.sample_omega(rng);
    prod *= (1.0 - w) / w;
    sum += prod;
    ++depth;
  };
  for (;;) {
    if (depth >= 1'000'000)
      throw TruncationFailure("series for S did not settle below tol");
    step();
    if (prod < tol) {
      bool rose = false;
      for (int i = 0; i < 50; ++i) {
        step();
        if (prod >= tol) {
          rose = true;
          break;
        }
      }
      if (!rose) break;
    }
  }
  return {1.0 / sum, depth, prod};
}

std::vector<double> invariant_pmf_mc(const EnvModel& model, long long u_max,
                                     long long n_env, Stream& rng,
                                     double tol) {
  std::vector<double> pi(static_cast<std::size_t>(u_max) + 1, 0.0);
  for (long long j = 0; j < n_env; ++j) {
    const double s = sample_S(model, rng, tol).s_value;
    const double x = 1.0 - s;
    double w = s;
    for (auto& cell : pi) {
      cell += w;
      w *= x;
    }
  }
  for (auto& cell : pi) cell /= static_cast<double>(n_env);
  return pi;
}

double truncated_moment(const EnvModel& model, double alpha, long long K,
                        long long n_env, Stream& rng, double tol) {
  std::vector<double> k_pow(static_cast<std::size_t>(K) + 1, 0.0);
  for (long long k = 1; k <= K; ++k)
    k_pow[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(k), alpha);
  const double k_pow_max = k_pow[static_cast<std::size_t>(K)];
  double acc = 0.0;
  for (long long j = 0; j < n_env; ++j) {
    const double s = sample_S(model, rng, tol).s_value;
    const double x = 1.0 - s;
    double w = s * x;  // s * x^k, starting at k = 1
    for (long long k = 1; k <= K; ++k) {
      acc += k_pow[static_cast<std::size_t>(k)] * w;
      // Remaining terms are below k_max^alpha * w * x / (1-x); stop once
      // that certified remainder is negligible.
      if (k_pow_max * w * x < 1e-18 * s) break;
      w *= x;
    }
  }
  return acc / static_cast<double>(n_env);
}

}  // namespace rwre
