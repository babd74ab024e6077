#pragma once

#include <cmath>

#include "rwre/harness.hpp"

namespace rwre {
namespace presets {

// omega in {0.4, 0.7}, P(0.4) = 0.548: transient right, tail index ~0.9.
inline EnvModel two_point_benchmark() {
  return EnvModel::two_point(0.548, 0.4, 0.7, {0.01, 0.99});
}

// omega in {a, 1-a} with a = 0.4 and P(a) = p chosen so E[rho^0.9] = 1
// exactly: p = 1 / (1 + 1.5^0.9) ~= 0.4098. The box top stays below p and
// keeps a = 0.4 interior.
inline EnvModel temkin_benchmark() {
  const double p = 1.0 / (1.0 + std::pow(1.5, 0.9));
  return EnvModel::temkin(0.4, p, {0.01, 0.405});
}

// Beta(2.5, 2) environment: tail index exactly 1/2.
inline EnvModel beta_benchmark() {
  return EnvModel::beta(2.5, 2.0, {2.1, 2.6}, {1.6, 2.05});
}

inline ExperimentSpec two_point_experiment() {
  ExperimentSpec spec(two_point_benchmark());
  spec.example = "two_point";
  spec.seed = 20260819;
  return spec;
}

inline ExperimentSpec temkin_experiment() {
  ExperimentSpec spec(temkin_benchmark());
  spec.example = "temkin";
  spec.seed = 20260820;
  return spec;
}

}  // namespace presets
}  // namespace rwre
