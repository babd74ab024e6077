#include "rwre/walk_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

QuenchedEnv::QuenchedEnv(const EnvModel& model, std::uint64_t env_seed)
    : model_(model), seed_(env_seed) {}

QuenchedEnv QuenchedEnv::constant(double omega) {
  if (!(omega > 0.0 && omega <= 1.0))
    throw ConfigError("constant omega must lie in (0,1]");
  QuenchedEnv e;
  e.const_omega_ = omega;
  return e;
}

double QuenchedEnv::draw_site(long long x) const {
  Stream s(derive_seed(seed_, zigzag(x)));
  return model_->sample_omega(s);
}

double QuenchedEnv::omega(long long x) {
  if (const_omega_ > 0.0) return const_omega_;
  if (x >= 0) {
    const auto idx = static_cast<std::size_t>(x);
    while (fwd_.size() <= idx)
      fwd_.push_back(draw_site(static_cast<long long>(fwd_.size())));
    return fwd_[idx];
  }
  const auto idx = static_cast<std::size_t>(-x - 1);
  while (bwd_.size() <= idx)
    bwd_.push_back(draw_site(-static_cast<long long>(bwd_.size()) - 1));
  return bwd_[idx];
}

Walker::Walker(QuenchedEnv env, std::uint64_t walk_seed)
    : env_(std::move(env)), rng_(walk_seed) {}

std::uint64_t& Walker::left_at(long long x) {
  if (x >= 0) {
    const auto idx = static_cast<std::size_t>(x);
    if (left_fwd_.size() <= idx) left_fwd_.resize(idx + 1, 0);
    return left_fwd_[idx];
  }
  const auto idx = static_cast<std::size_t>(-x - 1);
  if (left_bwd_.size() <= idx) left_bwd_.resize(idx + 1, 0);
  return left_bwd_[idx];
}

signed char& Walker::first_at(long long x) {
  if (x >= 0) {
    const auto idx = static_cast<std::size_t>(x);
    if (first_fwd_.size() <= idx) first_fwd_.resize(idx + 1, 0);
    return first_fwd_[idx];
  }
  const auto idx = static_cast<std::size_t>(-x - 1);
  if (first_bwd_.size() <= idx) first_bwd_.resize(idx + 1, 0);
  return first_bwd_[idx];
}

bool Walker::run_until(long long target, std::uint64_t step_cap) {
  if (target < pos_)
    throw std::logic_error("targets must be visited in increasing order");
  while (pos_ != target && steps_ < step_cap) {
    const double w = env_.omega(pos_);
    const bool right = rng_.uniform() < w;
    signed char& fm = first_at(pos_);
    if (fm == 0) fm = right ? 1 : -1;
    if (right) {
      ++pos_;
    } else {
      ++left_at(pos_);
      ++left_total_;
      --pos_;
    }
    ++steps_;
  }
  return pos_ == target;
}

WalkOutcome Walker::outcome(long long n) const {
  WalkOutcome o;
  o.n = n;
  o.hit = (pos_ == n);
  o.total_steps = steps_;
  o.left_counts.assign(static_cast<std::size_t>(n) + 1, 0);
  const std::size_t upto =
      std::min(o.left_counts.size(), left_fwd_.size());
  for (std::size_t x = 0; x < upto; ++x) o.left_counts[x] = left_fwd_[x];
  for (std::size_t i = 0; i < first_bwd_.size(); ++i)
    if (first_bwd_[i] != 0)
      o.first_move[-static_cast<long long>(i) - 1] = first_bwd_[i];
  for (std::size_t i = 0; i < first_fwd_.size(); ++i) {
    const auto x = static_cast<long long>(i);
    if (x == n) continue;  // no departure observed from the arrival site
    if (first_fwd_[i] != 0) o.first_move[x] = first_fwd_[i];
  }
  return o;
}

WalkOutcome run_to_hitting(const EnvModel& model, std::uint64_t env_seed,
                           long long n, std::uint64_t t_max,
                           std::uint64_t walk_seed) {
  if (n < 1) throw ConfigError("hitting level must be >= 1");
  if (t_max < static_cast<std::uint64_t>(n))
    throw ConfigError("step cap below the hitting level can never hit");
  Walker w(QuenchedEnv(model, env_seed), walk_seed);
  w.run_until(n, t_max);
  return w.outcome(n);
}

std::uint64_t default_t_max(long long n, double kappa, double factor) {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  const double raw = factor * std::pow(static_cast<double>(n), 1.0 / kappa);
  return static_cast<std::uint64_t>(std::ceil(raw));
}

}  // namespace rwre
