#pragma once

#include <array>
#include <string>
#include <vector>

#include "rwre/rng.hpp"

namespace rwre {

enum class Family { two_point, beta, temkin };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

struct Bounds {
  double lo = 0, hi = 0;
};

enum class Regime { not_transient_right, ballistic, sub_ballistic };

// A parametric law for the site probability omega of stepping right.
// Exposes the annealed one-site log moment
//   log_phi(u, v) = log E[ omega^(u+1) * (1 - omega)^v ]
// together with its derivatives in the model parameter, the odds moments
// E[rho^s] with rho = (1 - omega)/omega, and sampling.
class EnvModel {
 public:
  // omega = a1 with probability p, a2 with probability 1-p; parameter p.
  static EnvModel two_point(double p, double a1, double a2,
                            Bounds p_box = {0.01, 0.99});
  // omega ~ Beta(alpha, beta); parameter (alpha, beta). The boxes must
  // satisfy beta_hi < alpha_lo and alpha_hi <= beta_lo + 1 so every box
  // point is transient to the right without being ballistic.
  static EnvModel beta(double alpha, double beta, Bounds alpha_box,
                       Bounds beta_box);
  // omega = a with probability p, 1-a with probability 1-p; p in (0, 1/2)
  // fixed and known, parameter a. Default box [0.01, p - 0.01].
  static EnvModel temkin(double a, double p);
  static EnvModel temkin(double a, double p, Bounds a_box);

  Family family() const { return family_; }
  int dim() const { return family_ == Family::beta ? 2 : 1; }
  std::vector<double> theta() const;
  const std::vector<Bounds>& box() const { return box_; }
  bool theta_in_box_interior(const std::vector<double>& th) const;

  // Same family, fixed quantities and box, new parameter value.
  EnvModel with_theta(const std::vector<double>& th) const;

  double log_phi(double u, double v) const;
  // Gradient and Hessian of log_phi in the parameter. For 1-parameter
  // families only entry 0 (grad) / entry 0 (hess) is meaningful.
  // Hessian packing: {d2/dt0dt0, d2/dt0dt1, d2/dt1dt1}.
  std::array<double, 2> grad_phi(double u, double v) const;
  std::array<double, 3> hess_phi(double u, double v) const;

  double moment_rho(double s) const;  // +inf when the moment diverges
  double e_log_rho() const;
  // Unique positive root of E[rho^s] = 1, searched on (0, s_max];
  // +inf when no root exists there. Requires E[log rho] < 0.
  double solve_kappa(double s_max = 64.0, double tol = 1e-12) const;
  Regime classify_regime() const;

  double sample_omega(Stream& rng) const;

  // Fixed (non-parameter) quantities, family dependent.
  double fixed_a1() const { return a1_; }
  double fixed_a2() const { return a2_; }
  double fixed_p() const { return p_fixed_; }

 private:
  EnvModel() = default;
  void refresh_caches();
  void validate() const;

  Family family_ = Family::two_point;
  // two_point: theta0_ = p, a1_, a2_ fixed.
  // beta:      theta0_ = alpha, theta1_ = beta.
  // temkin:    theta0_ = a, p_fixed_ fixed.
  double theta0_ = 0, theta1_ = 0;
  double a1_ = 0, a2_ = 0, p_fixed_ = 0;
  std::vector<Bounds> box_;

  // caches
  double log_w1_ = 0, log_w2_ = 0;          // atom log-weights
  double log_a1_ = 0, log_1ma1_ = 0;        // atom 1 logs
  double log_a2_ = 0, log_1ma2_ = 0;        // atom 2 logs
  double lbeta_ = 0;                        // log B(alpha, beta)
  double psi_a_ = 0, psi_b_ = 0, psi_ab_ = 0;
  double tri_a_ = 0, tri_b_ = 0, tri_ab_ = 0;
};

}  // namespace rwre
