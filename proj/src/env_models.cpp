#include "rwre/env_models.hpp"

#include <cmath>
#include <limits>

#include "rwre/errors.hpp"
#include "rwre/special.hpp"

namespace rwre {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit_open(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0))
    throw ConfigError(std::string(what) + " must lie strictly inside (0,1)");
}

void check_box(const Bounds& b, const char* what) {
  if (!(b.lo < b.hi))
    throw ConfigError(std::string(what) + " box must have lo < hi");
}
}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::two_point: return "two_point";
    case Family::beta: return "beta";
    case Family::temkin: return "temkin";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "two_point") return Family::two_point;
  if (s == "beta") return Family::beta;
  if (s == "temkin") return Family::temkin;
  throw ConfigError("unknown family: " + s);
}

EnvModel EnvModel::two_point(double p, double a1, double a2, Bounds p_box) {
  EnvModel m;
  m.family_ = Family::two_point;
  m.theta0_ = p;
  m.a1_ = a1;
  m.a2_ = a2;
  m.box_ = {p_box};
  m.validate();
  m.refresh_caches();
  return m;
}

EnvModel EnvModel::beta(double alpha, double beta, Bounds alpha_box,
                        Bounds beta_box) {
  EnvModel m;
  m.family_ = Family::beta;
  m.theta0_ = alpha;
  m.theta1_ = beta;
  m.box_ = {alpha_box, beta_box};
  m.validate();
  m.refresh_caches();
  return m;
}

EnvModel EnvModel::temkin(double a, double p) {
  return temkin(a, p, Bounds{0.01, p - 0.01});
}

EnvModel EnvModel::temkin(double a, double p, Bounds a_box) {
  EnvModel m;
  m.family_ = Family::temkin;
  m.theta0_ = a;
  m.p_fixed_ = p;
  m.box_ = {a_box};
  m.validate();
  m.refresh_caches();
  return m;
}

void EnvModel::validate() const {
  switch (family_) {
    case Family::two_point:
      check_unit_open(a1_, "a1");
      check_unit_open(a2_, "a2");
      if (!(a1_ <= a2_)) throw ConfigError("two_point needs a1 <= a2");
      if (!(theta0_ >= 0.0 && theta0_ <= 1.0))
        throw ConfigError("two_point p must lie in [0,1]");
      check_box(box_[0], "p");
      if (!(box_[0].lo > 0.0 && box_[0].hi < 1.0))
        throw ConfigError("p box must lie strictly inside (0,1)");
      break;
    case Family::beta:
      if (!(theta0_ > 0.0 && theta1_ > 0.0))
        throw ConfigError("beta needs alpha > 0 and beta > 0");
      check_box(box_[0], "alpha");
      check_box(box_[1], "beta");
      if (!(box_[1].lo > 0.0))
        throw ConfigError("beta box must stay positive");
      if (!(box_[1].hi < box_[0].lo))
        throw ConfigError("beta boxes need beta_hi < alpha_lo");
      if (!(box_[0].hi <= box_[1].lo + 1.0))
        throw ConfigError("beta boxes need alpha_hi <= beta_lo + 1");
      break;
    case Family::temkin:
      check_unit_open(theta0_, "a");
      if (!(p_fixed_ > 0.0 && p_fixed_ < 0.5))
        throw ConfigError("temkin p must lie in (0, 1/2)");
      check_box(box_[0], "a");
      if (!(box_[0].lo > 0.0 && box_[0].hi < p_fixed_))
        throw ConfigError("temkin a box must lie strictly inside (0, p)");
      break;
  }
}

void EnvModel::refresh_caches() {
  switch (family_) {
    case Family::two_point:
      log_w1_ = std::log(theta0_);
      log_w2_ = std::log1p(-theta0_);
      log_a1_ = std::log(a1_);
      log_1ma1_ = std::log1p(-a1_);
      log_a2_ = std::log(a2_);
      log_1ma2_ = std::log1p(-a2_);
      break;
    case Family::temkin:
      log_w1_ = std::log(p_fixed_);
      log_w2_ = std::log1p(-p_fixed_);
      log_a1_ = std::log(theta0_);       // atom a
      log_1ma1_ = std::log1p(-theta0_);  // its complement
      break;
    case Family::beta:
      lbeta_ = std::lgamma(theta0_) + std::lgamma(theta1_) -
               std::lgamma(theta0_ + theta1_);
      psi_a_ = digamma(theta0_);
      psi_b_ = digamma(theta1_);
      psi_ab_ = digamma(theta0_ + theta1_);
      tri_a_ = trigamma(theta0_);
      tri_b_ = trigamma(theta1_);
      tri_ab_ = trigamma(theta0_ + theta1_);
      break;
  }
}

std::vector<double> EnvModel::theta() const {
  if (family_ == Family::beta) return {theta0_, theta1_};
  return {theta0_};
}

bool EnvModel::theta_in_box_interior(const std::vector<double>& th) const {
  if (static_cast<int>(th.size()) != dim()) return false;
  for (std::size_t i = 0; i < th.size(); ++i)
    if (!(th[i] > box_[i].lo && th[i] < box_[i].hi)) return false;
  return true;
}

EnvModel EnvModel::with_theta(const std::vector<double>& th) const {
  if (static_cast<int>(th.size()) != dim())
    throw ConfigError("parameter dimension mismatch");
  EnvModel m = *this;
  m.theta0_ = th[0];
  if (family_ == Family::beta) m.theta1_ = th[1];
  m.validate();
  m.refresh_caches();
  return m;
}

double EnvModel::log_phi(double u, double v) const {
  switch (family_) {
    case Family::two_point:
      return log_sum_exp(log_w1_ + (u + 1.0) * log_a1_ + v * log_1ma1_,
                         log_w2_ + (u + 1.0) * log_a2_ + v * log_1ma2_);
    case Family::temkin:
      return log_sum_exp(log_w1_ + (u + 1.0) * log_a1_ + v * log_1ma1_,
                         log_w2_ + (u + 1.0) * log_1ma1_ + v * log_a1_);
    case Family::beta:
      return std::lgamma(u + 1.0 + theta0_) + std::lgamma(v + theta1_) -
             std::lgamma(u + 1.0 + theta0_ + v + theta1_) - lbeta_;
  }
  return 0;
}

std::array<double, 2> EnvModel::grad_phi(double u, double v) const {
  switch (family_) {
    case Family::two_point: {
      // phi = log(p e^{c1} + (1-p) e^{c2}) with c_i free of p.
      const double c1 = (u + 1.0) * log_a1_ + v * log_1ma1_;
      const double c2 = (u + 1.0) * log_a2_ + v * log_1ma2_;
      const double phi = log_sum_exp(log_w1_ + c1, log_w2_ + c2);
      return {std::exp(c1 - phi) - std::exp(c2 - phi), 0.0};
    }
    case Family::temkin: {
      const double a = theta0_;
      const double l1 = log_w1_ + (u + 1.0) * log_a1_ + v * log_1ma1_;
      const double l2 = log_w2_ + (u + 1.0) * log_1ma1_ + v * log_a1_;
      const double m = log_sum_exp(l1, l2);
      const double s1 = std::exp(l1 - m);
      const double s2 = std::exp(l2 - m);
      const double g1 = (u + 1.0) / a - v / (1.0 - a);
      const double g2 = -(u + 1.0) / (1.0 - a) + v / a;
      return {s1 * g1 + s2 * g2, 0.0};
    }
    case Family::beta: {
      const double total = digamma(u + 1.0 + theta0_ + v + theta1_);
      return {digamma(u + 1.0 + theta0_) - total - psi_a_ + psi_ab_,
              digamma(v + theta1_) - total - psi_b_ + psi_ab_};
    }
  }
  return {0, 0};
}

std::array<double, 3> EnvModel::hess_phi(double u, double v) const {
  switch (family_) {
    case Family::two_point: {
      // Mixture weights are affine in p, so the second derivative of the
      // log is minus the squared first derivative.
      const double g = grad_phi(u, v)[0];
      return {-g * g, 0.0, 0.0};
    }
    case Family::temkin: {
      const double a = theta0_;
      const double l1 = log_w1_ + (u + 1.0) * log_a1_ + v * log_1ma1_;
      const double l2 = log_w2_ + (u + 1.0) * log_1ma1_ + v * log_a1_;
      const double m = log_sum_exp(l1, l2);
      const double s1 = std::exp(l1 - m);
      const double s2 = std::exp(l2 - m);
      const double g1 = (u + 1.0) / a - v / (1.0 - a);
      const double g2 = -(u + 1.0) / (1.0 - a) + v / a;
      const double dg1 = -(u + 1.0) / (a * a) - v / ((1.0 - a) * (1.0 - a));
      const double dg2 = -(u + 1.0) / ((1.0 - a) * (1.0 - a)) - v / (a * a);
      const double g = s1 * g1 + s2 * g2;
      return {s1 * (g1 * g1 + dg1) + s2 * (g2 * g2 + dg2) - g * g, 0.0, 0.0};
    }
    case Family::beta: {
      const double tri_total = trigamma(u + 1.0 + theta0_ + v + theta1_);
      const double haa =
          trigamma(u + 1.0 + theta0_) - tri_total - tri_a_ + tri_ab_;
      const double hab = -tri_total + tri_ab_;
      const double hbb = trigamma(v + theta1_) - tri_total - tri_b_ + tri_ab_;
      return {haa, hab, hbb};
    }
  }
  return {0, 0, 0};
}

double EnvModel::moment_rho(double s) const {
  switch (family_) {
    case Family::two_point: {
      const double r1 = (1.0 - a1_) / a1_;
      const double r2 = (1.0 - a2_) / a2_;
      return theta0_ * std::pow(r1, s) + (1.0 - theta0_) * std::pow(r2, s);
    }
    case Family::temkin: {
      const double r = (1.0 - theta0_) / theta0_;
      return p_fixed_ * std::pow(r, s) + (1.0 - p_fixed_) * std::pow(r, -s);
    }
    case Family::beta: {
      if (s >= theta0_) return kInf;
      return std::exp(std::lgamma(theta0_ - s) + std::lgamma(theta1_ + s) -
                      std::lgamma(theta0_) - std::lgamma(theta1_));
    }
  }
  return kInf;
}

double EnvModel::e_log_rho() const {
  switch (family_) {
    case Family::two_point: {
      const double l1 = log_1ma1_ - log_a1_;
      const double l2 = log_1ma2_ - log_a2_;
      return theta0_ * l1 + (1.0 - theta0_) * l2;
    }
    case Family::temkin:
      return (2.0 * p_fixed_ - 1.0) * (log_1ma1_ - log_a1_);
    case Family::beta:
      return digamma(theta1_) - digamma(theta0_);
  }
  return 0;
}

double EnvModel::solve_kappa(double s_max, double tol) const {
  if (!(e_log_rho() < 0.0))
    throw NotTransientRight("kappa is defined only for E[log rho] < 0");
  // f(s) = E[rho^s] - 1 is convex, f(0)=0, f'(0)<0; find the sign change
  // by doubling, then bisect. Divergent moments count as positive.
  auto f = [this](double s) { return moment_rho(s) - 1.0; };
  double lo = 0.0;
  double hi = std::min(1.0, s_max);
  while (f(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > s_max) {
      if (f(s_max) <= 0.0) return kInf;
      hi = s_max;
      break;
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Regime EnvModel::classify_regime() const {
  if (!(e_log_rho() < 0.0)) return Regime::not_transient_right;
  return moment_rho(1.0) < 1.0 ? Regime::ballistic : Regime::sub_ballistic;
}

double EnvModel::sample_omega(Stream& rng) const {
  switch (family_) {
    case Family::two_point:
      return rng.uniform() < theta0_ ? a1_ : a2_;
    case Family::temkin:
      return rng.uniform() < p_fixed_ ? theta0_ : 1.0 - theta0_;
    case Family::beta:
      return rng.beta(theta0_, theta1_);
  }
  return 0.5;
}

}  // namespace rwre
