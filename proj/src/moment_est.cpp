#include "rwre/moment_est.hpp"

#include <algorithm>
#include <cmath>

#include "rwre/errors.hpp"

namespace rwre {

double v_hat(const WalkOutcome& o) {
  if (o.first_move.empty())
    throw EmptyPath("no departures recorded on this path");
  long long right = 0;
  for (const auto& [site, dir] : o.first_move)
    if (dir > 0) ++right;
  return static_cast<double>(right) /
         static_cast<double>(o.first_move.size());
}

double invert_two_point(double v, double a1, double a2) {
  if (!(a2 > a1)) throw ConfigError("inversion needs a1 < a2");
  return (a2 - v) / (a2 - a1);
}

double invert_temkin(double v, double p) {
  if (p == 0.5) throw ConfigError("inversion needs p != 1/2");
  return (v - (1.0 - p)) / (2.0 * p - 1.0);
}

MomentEstimate moment_estimate(const WalkOutcome& o, const EnvModel& model) {
  MomentEstimate e;
  e.v = v_hat(o);
  switch (model.family()) {
    case Family::two_point:
      e.raw = invert_two_point(e.v, model.fixed_a1(), model.fixed_a2());
      break;
    case Family::temkin:
      e.raw = invert_temkin(e.v, model.fixed_p());
      break;
    case Family::beta:
      throw ConfigError("no first-moment baseline for the beta family");
  }
  const Bounds b = model.box()[0];
  e.theta = std::clamp(e.raw, b.lo, b.hi);
  e.clipped = (e.theta != e.raw);
  return e;
}

}  // namespace rwre
