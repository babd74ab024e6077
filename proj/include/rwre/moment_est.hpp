#pragma once

#include "rwre/env_models.hpp"
#include "rwre/walk_sim.hpp"

namespace rwre {

// Fraction of departed sites whose first recorded move went right.
// Throws EmptyPath when no site ever departed.
double v_hat(const WalkOutcome& o);

// Closed-form inversions of v = E[omega] for the two-atom families.
double invert_two_point(double v, double a1, double a2);
double invert_temkin(double v, double p);

struct MomentEstimate {
  double theta = 0;     // clipped into the model's box
  double raw = 0;       // before clipping
  bool clipped = false;
  double v = 0;         // the plug-in fraction used
};

// First-moment estimator for one-parameter atom families; the beta family
// has no such baseline and is rejected.
MomentEstimate moment_estimate(const WalkOutcome& o, const EnvModel& model);

}  // namespace rwre
