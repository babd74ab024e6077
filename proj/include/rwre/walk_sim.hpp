#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rwre/env_models.hpp"
#include "rwre/rng.hpp"

namespace rwre {

// One frozen environment: omega at each site of the integer line, drawn
// lazily and memoized. Each site has its own sub-stream keyed by the site
// index, so values do not depend on the order sites are first visited.
class QuenchedEnv {
 public:
  QuenchedEnv(const EnvModel& model, std::uint64_t env_seed);

  // Test hook: every site gets the same fixed omega.
  static QuenchedEnv constant(double omega);

  double omega(long long x);

 private:
  QuenchedEnv() = default;
  double draw_site(long long x) const;

  std::optional<EnvModel> model_;
  double const_omega_ = -1.0;
  std::uint64_t seed_ = 0;
  std::vector<double> fwd_;  // sites 0, 1, 2, ...
  std::vector<double> bwd_;  // sites -1, -2, ...
};

// Statistics of one walk path observed at its first visit to level n.
struct WalkOutcome {
  long long n = 0;
  bool hit = false;               // false when the step cap fired first
  std::uint64_t total_steps = 0;  // steps consumed (== hitting time if hit)
  // left_counts[x] = number of left steps from site x, for x in [0, n].
  // The entry at n is always 0 on a hit (the walk stops on arrival).
  std::vector<std::uint64_t> left_counts;
  // First departure direction per visited site: +1 right, -1 left.
  // The level-n site is excluded (no departure observed from it).
  std::map<long long, int> first_move;
};

// Nearest-neighbour walk in a quenched environment, started at 0.
// run_until may be called repeatedly with increasing targets; the path and
// the step budget continue from where the previous call stopped, so a
// continued run is the same path a single long run would have produced.
class Walker {
 public:
  Walker(QuenchedEnv env, std::uint64_t walk_seed);

  // Walk until the position first equals target (returns true) or the
  // cumulative step count reaches step_cap (returns false).
  bool run_until(long long target, std::uint64_t step_cap);

  // Snapshot against level n. Valid immediately after run_until(n, cap).
  WalkOutcome outcome(long long n) const;

  long long position() const { return pos_; }
  std::uint64_t total_steps() const { return steps_; }
  std::uint64_t left_steps() const { return left_total_; }

 private:
  std::uint64_t& left_at(long long x);
  signed char& first_at(long long x);

  QuenchedEnv env_;
  Stream rng_;
  long long pos_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t left_total_ = 0;
  std::vector<std::uint64_t> left_fwd_, left_bwd_;
  std::vector<signed char> first_fwd_, first_bwd_;  // 0 unseen, +1/-1
};

// Convenience wrapper: fresh walk, one target.
WalkOutcome run_to_hitting(const EnvModel& model, std::uint64_t env_seed,
                           long long n, std::uint64_t t_max,
                           std::uint64_t walk_seed);

// Default step cap ceil(factor * n^(1/kappa)); kappa must be positive.
std::uint64_t default_t_max(long long n, double kappa, double factor = 500.0);

}  // namespace rwre
