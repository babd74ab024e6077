#pragma once

#include <cstdint>
#include <vector>

#include "rwre/env_models.hpp"
#include "rwre/rng.hpp"

namespace rwre {

// Annealed transition log-probability log Q(u, v) of the left-step chain:
// Q(u, v) = C(u + v, v) * exp(log_phi(u, v)).
double log_q(const EnvModel& model, long long u, long long v);

// Row u of Q as a dense vector over v = 0, 1, ..., truncated once the
// certified tail bound drops below tail_tol. The returned probabilities
// sum to 1 within tail_tol.
std::vector<double> kernel_row(const EnvModel& model, long long u,
                               double tail_tol = 1e-12);

// One chain step at a fixed environment draw: the number of failures in
// z + 1 independent geometric(omega) trials.
long long step_z_given_omega(double omega, long long z, Stream& rng);

// One annealed chain step: draws a fresh omega from the model first.
long long step_z(const EnvModel& model, long long z, Stream& rng);

// Chain path (Z_0, ..., Z_length) started at Z_0 = 0.
std::vector<long long> simulate_chain(const EnvModel& model, long long length,
                                      Stream& rng);

struct SSample {
  double s_value = 0;           // in (0, 1)
  long long truncation_depth = 0;
  double tail_bound = 0;        // last partial product, below tol
};

// One draw of S = 1 / (1 + rho_1 + rho_1 rho_2 + ...) with i.i.d. site
// draws. The series is cut once the running product stays below tol for 50
// consecutive extra terms. Throws TruncationFailure past 10^6 terms.
SSample sample_S(const EnvModel& model, Stream& rng, double tol = 1e-12);

// Monte Carlo estimate of the invariant law pi(u) = E[S (1-S)^u] on
// u = 0..u_max from n_env independent S draws.
std::vector<double> invariant_pmf_mc(const EnvModel& model, long long u_max,
                                     long long n_env, Stream& rng,
                                     double tol = 1e-12);

// Monte Carlo estimate of sum_{k=1..K} k^alpha * pi(k) from n_env draws.
double truncated_moment(const EnvModel& model, double alpha, long long K,
                        long long n_env, Stream& rng, double tol = 1e-12);

}  // namespace rwre
