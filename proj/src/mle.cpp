#include "rwre/mle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rwre/errors.hpp"
#include "rwre/special.hpp"

namespace rwre {

namespace {

double sum_log_phi(const LeftStepData& data, const EnvModel& m) {
  double s = 0.0;
  for (const auto& p : data.weighted())
    s += p.weight * m.log_phi(p.u, p.v);
  return s;
}

}  // namespace

LeftStepData LeftStepData::from_outcome(const WalkOutcome& o) {
  std::map<std::pair<long long, long long>, long long> counts;
  long long total = 0;
  for (std::size_t x = 0; x + 1 < o.left_counts.size(); ++x) {
    const auto u = static_cast<long long>(o.left_counts[x + 1]);
    const auto v = static_cast<long long>(o.left_counts[x]);
    ++counts[{u, v}];
    ++total;
  }
  LeftStepData d;
  d.n_pairs_ = total;
  d.pairs_.reserve(counts.size());
  for (const auto& [uv, w] : counts)
    d.pairs_.push_back({static_cast<double>(uv.first),
                        static_cast<double>(uv.second),
                        static_cast<double>(w)});
  return d;
}

LeftStepData LeftStepData::from_chain(const std::vector<long long>& z) {
  std::map<std::pair<long long, long long>, long long> counts;
  long long total = 0;
  for (std::size_t k = 0; k + 1 < z.size(); ++k) {
    ++counts[{z[k], z[k + 1]}];
    ++total;
  }
  LeftStepData d;
  d.n_pairs_ = total;
  d.pairs_.reserve(counts.size());
  for (const auto& [uv, w] : counts)
    d.pairs_.push_back({static_cast<double>(uv.first),
                        static_cast<double>(uv.second),
                        static_cast<double>(w)});
  return d;
}

bool Matrix2::positive_definite() const {
  if (dim == 1) return m[0][0] > 0.0;
  return m[0][0] > 0.0 && m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.0;
}

Matrix2 Matrix2::inverse() const {
  if (!positive_definite())
    throw SingularFisher("information matrix is not positive definite");
  Matrix2 r;
  r.dim = dim;
  if (dim == 1) {
    r.m[0][0] = 1.0 / m[0][0];
    return r;
  }
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  r.m[0][0] = m[1][1] / det;
  r.m[1][1] = m[0][0] / det;
  r.m[0][1] = r.m[1][0] = -m[0][1] / det;
  return r;
}

double criterion(const LeftStepData& data, const EnvModel& proto,
                 const std::vector<double>& theta,
                 const std::vector<double>& theta0) {
  return sum_log_phi(data, proto.with_theta(theta)) -
         sum_log_phi(data, proto.with_theta(theta0));
}

ScalarMaxResult maximize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol,
                                int max_evals) {
  if (!(lo < hi)) throw ConfigError("maximize_scalar needs lo < hi");
  const double gold = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  int evals = 0;
  auto g = [&](double t) {
    ++evals;
    return -f(t);
  };
  double x = a + gold * (b - a);
  double w = x, v = x;
  double fx = g(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  bool converged = false;
  for (;;) {
    const double m = 0.5 * (a + b);
    const double tol2 = 2.0 * tol;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
      converged = true;
      break;
    }
    if (evals >= max_evals) break;
    bool parab = false;
    if (std::fabs(e) > tol) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
          p < q * (b - x)) {
        parab = true;
        d = p / q;
        const double u_try = x + d;
        if (u_try - a < tol2 || b - u_try < tol2) d = (m > x) ? tol : -tol;
      }
    }
    if (!parab) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    const double u =
        (std::fabs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
    const double fu = g(u);
    if (fu < fx || (fu == fx && u < x)) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, -fx, evals, converged};
}

namespace {

std::vector<double> clamp_into(const std::vector<double>& x,
                               const std::vector<Bounds>& box) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = std::clamp(x[i], box[i].lo, box[i].hi);
  return y;
}

struct SimplexPoint {
  std::vector<double> x;
  double fx;
};

VectorMaxResult nelder_mead_pass(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Bounds>& box, std::vector<double> start, double scale,
    double tol, int max_evals, int& evals) {
  const std::size_t d = box.size();
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(clamp_into(x, box));
  };
  std::vector<SimplexPoint> s(d + 1);
  s[0] = {start, eval(start)};
  for (std::size_t i = 0; i < d; ++i) {
    auto x = start;
    x[i] += scale * (box[i].hi - box[i].lo);
    if (x[i] > box[i].hi) x[i] = start[i] - scale * (box[i].hi - box[i].lo);
    s[i + 1] = {x, eval(x)};
  }
  auto by_desc = [](const SimplexPoint& a, const SimplexPoint& b) {
    return a.fx > b.fx;
  };
  bool converged = false;
  while (evals < max_evals) {
    std::sort(s.begin(), s.end(), by_desc);
    double spread = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      spread = std::max(spread, std::fabs(s.front().x[i] - s.back().x[i]));
    if (spread < tol) {
      converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) centroid[i] += s[j].x[i];
    }
    for (auto& c : centroid) c /= static_cast<double>(d);
    auto blend = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i)
        x[i] = centroid[i] + t * (centroid[i] - s.back().x[i]);
      return x;
    };
    auto xr = blend(1.0);
    const double fr = eval(xr);
    if (fr > s[0].fx) {
      auto xe = blend(2.0);
      const double fe = eval(xe);
      if (fe > fr)
        s.back() = {xe, fe};
      else
        s.back() = {xr, fr};
    } else if (fr > s[d - 1].fx) {
      s.back() = {xr, fr};
    } else {
      auto xc = blend(-0.5);
      const double fc = eval(xc);
      if (fc > s.back().fx) {
        s.back() = {xc, fc};
      } else {
        for (std::size_t j = 1; j <= d; ++j) {
          for (std::size_t i = 0; i < d; ++i)
            s[j].x[i] = s[0].x[i] + 0.5 * (s[j].x[i] - s[0].x[i]);
          s[j].fx = eval(s[j].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_desc);
  return {clamp_into(s[0].x, box), s[0].fx, evals, converged};
}

}  // namespace

VectorMaxResult maximize_box(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Bounds>& box, double tol, int max_evals) {
  std::vector<double> center(box.size());
  for (std::size_t i = 0; i < box.size(); ++i)
    center[i] = 0.5 * (box[i].lo + box[i].hi);
  int evals = 0;
  auto first = nelder_mead_pass(f, box, center, 0.25, tol, max_evals, evals);
  auto second =
      nelder_mead_pass(f, box, first.x, 0.05, tol, max_evals, evals);
  auto best = second.fx >= first.fx ? second : first;
  best.evals = evals;
  best.converged = first.converged && second.converged;
  return best;
}

FisherPair fisher_estimate(const LeftStepData& data, const EnvModel& proto,
                           const std::vector<double>& theta_hat) {
  const EnvModel m = proto.with_theta(theta_hat);
  const int d = m.dim();
  FisherPair fp;
  fp.outer.dim = fp.neg_hess.dim = d;
  const double n = static_cast<double>(data.n_pairs());
  for (const auto& p : data.weighted()) {
    const auto g = m.grad_phi(p.u, p.v);
    const auto h = m.hess_phi(p.u, p.v);
    fp.outer.m[0][0] += p.weight * g[0] * g[0];
    fp.neg_hess.m[0][0] -= p.weight * h[0];
    if (d == 2) {
      fp.outer.m[0][1] += p.weight * g[0] * g[1];
      fp.outer.m[1][1] += p.weight * g[1] * g[1];
      fp.neg_hess.m[0][1] -= p.weight * h[1];
      fp.neg_hess.m[1][1] -= p.weight * h[2];
    }
  }
  fp.outer.m[0][0] /= n;
  fp.neg_hess.m[0][0] /= n;
  if (d == 2) {
    fp.outer.m[0][1] /= n;
    fp.outer.m[1][0] = fp.outer.m[0][1];
    fp.outer.m[1][1] /= n;
    fp.neg_hess.m[0][1] /= n;
    fp.neg_hess.m[1][0] = fp.neg_hess.m[0][1];
    fp.neg_hess.m[1][1] /= n;
  }
  return fp;
}

std::vector<Bounds> confidence_region(const std::vector<double>& theta_hat,
                                      const Matrix2& sigma, long long n,
                                      double level) {
  if (!(level >= 0.0 && level < 1.0))
    throw ConfigError("confidence level must lie in [0,1)");
  const Matrix2 inv = sigma.inverse();
  const double z = level == 0.0 ? 0.0 : normal_quantile(0.5 * (1.0 + level));
  std::vector<Bounds> ci(theta_hat.size());
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    const double hw =
        z * std::sqrt(inv.at(static_cast<int>(i), static_cast<int>(i)) /
                      static_cast<double>(n));
    ci[i] = {theta_hat[i] - hw, theta_hat[i] + hw};
  }
  return ci;
}

EstimateResult estimate_full(const LeftStepData& data, const EnvModel& proto,
                             std::vector<double> theta0, double level,
                             double tol) {
  if (data.n_pairs() < 1) throw ConfigError("no transition pairs to fit");
  const auto& box = proto.box();
  if (theta0.empty()) {
    theta0.resize(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
      theta0[i] = 0.5 * (box[i].lo + box[i].hi);
  }
  const double ref = sum_log_phi(data, proto.with_theta(theta0));

  EstimateResult r;
  r.n_pairs = data.n_pairs();
  r.level = level;
  if (proto.dim() == 1) {
    auto f = [&](double t) {
      return sum_log_phi(data, proto.with_theta({t})) - ref;
    };
    const auto m = maximize_scalar(f, box[0].lo, box[0].hi, tol);
    r.theta_hat = {m.x};
    r.criterion_value = m.fx;
    r.converged = m.converged;
  } else {
    auto f = [&](const std::vector<double>& t) {
      return sum_log_phi(data, proto.with_theta(t)) - ref;
    };
    const auto m = maximize_box(f, box, tol);
    r.theta_hat = m.x;
    r.criterion_value = m.fx;
    r.converged = m.converged;
  }

  const auto fp = fisher_estimate(data, proto, r.theta_hat);
  r.sigma = fp.outer;
  r.sigma_hess = fp.neg_hess;
  r.sigma_pd = r.sigma.positive_definite();
  if (r.sigma_pd) r.ci = confidence_region(r.theta_hat, r.sigma, r.n_pairs, level);
  return r;
}

}  // namespace rwre
