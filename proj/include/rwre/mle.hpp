#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rwre/env_models.hpp"
#include "rwre/walk_sim.hpp"

namespace rwre {

struct WeightedPair {
  double u = 0, v = 0;
  double weight = 0;  // multiplicity of this (u, v) in the path
};

// The consecutive left-step count pairs of one path, deduplicated. The
// estimation criterion only ever sees pair multiplicities, so collapsing
// repeats makes each criterion evaluation O(#distinct pairs).
class LeftStepData {
 public:
  // Pairs (from = left_counts[x+1], to = left_counts[x]) for x = 0..n-1.
  static LeftStepData from_outcome(const WalkOutcome& o);
  // Pairs (z[k], z[k+1]) of a chain path; same law as a hitting path read
  // from the far end, and the criterion is permutation invariant.
  static LeftStepData from_chain(const std::vector<long long>& z);

  long long n_pairs() const { return n_pairs_; }
  const std::vector<WeightedPair>& weighted() const { return pairs_; }

 private:
  std::vector<WeightedPair> pairs_;
  long long n_pairs_ = 0;
};

// Symmetric 1x1 or 2x2 matrix.
struct Matrix2 {
  int dim = 1;
  double m[2][2] = {{0, 0}, {0, 0}};
  double& at(int i, int j) { return m[i][j]; }
  double at(int i, int j) const { return m[i][j]; }
  bool positive_definite() const;
  Matrix2 inverse() const;  // throws SingularFisher when not PD
};

// Normalized log-likelihood-difference criterion
//   (1/1) sum_pairs w * [log_phi_theta(u,v) - log_phi_theta0(u,v)].
// Adding any fixed theta0 only shifts the surface by a constant.
double criterion(const LeftStepData& data, const EnvModel& proto,
                 const std::vector<double>& theta,
                 const std::vector<double>& theta0);

struct ScalarMaxResult {
  double x = 0;
  double fx = 0;
  int evals = 0;
  bool converged = false;
};

// Brent maximization on [lo, hi] to absolute tolerance tol in x. Ties and
// plateaus resolve toward the smaller x.
ScalarMaxResult maximize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol = 1e-8,
                                int max_evals = 500);

struct VectorMaxResult {
  std::vector<double> x;
  double fx = 0;
  int evals = 0;
  bool converged = false;
};

// Nelder-Mead maximization over a box; candidates are projected onto the
// box. Starts from the box center, then restarts once from the best point.
VectorMaxResult maximize_box(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Bounds>& box, double tol = 1e-8, int max_evals = 4000);

struct FisherPair {
  Matrix2 outer;     // mean of grad grad^T over pairs (primary form)
  Matrix2 neg_hess;  // minus the mean Hessian over pairs
};

FisherPair fisher_estimate(const LeftStepData& data, const EnvModel& proto,
                           const std::vector<double>& theta_hat);

struct EstimateResult {
  std::vector<double> theta_hat;
  double criterion_value = 0;
  bool converged = false;
  long long n_pairs = 0;
  Matrix2 sigma;       // outer-product information estimate
  Matrix2 sigma_hess;  // curvature form, reported for cross-checks
  bool sigma_pd = false;
  std::vector<Bounds> ci;  // empty unless sigma is PD
  double level = 0;
};

// Per-coordinate intervals theta_i +/- z_(1+level)/2 * sqrt(inv(Sigma)_ii/n).
// level = 0 collapses to the point itself.
std::vector<Bounds> confidence_region(const std::vector<double>& theta_hat,
                                      const Matrix2& sigma, long long n,
                                      double level);

// Maximize the criterion over the proto model's box, then attach the
// information estimate and confidence intervals. Empty theta0 means the
// box center.
EstimateResult estimate_full(const LeftStepData& data, const EnvModel& proto,
                             std::vector<double> theta0 = {},
                             double level = 0.95, double tol = 1e-8);

}  // namespace rwre
