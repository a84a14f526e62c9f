#include "neurwin/arms/deadline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace neurwin {

DeadlineArm::DeadlineArm(DeadlineParams params, uint64_t seed)
    : params_(params), rng_(seed) {
  if (params_.processing_cost < 0.0 || params_.processing_cost > 1.0)
    throw std::invalid_argument("DeadlineArm: processing cost must lie in [0, 1]");
  if (params_.empty_arrival_prob < 0.0 || params_.empty_arrival_prob > 1.0)
    throw std::invalid_argument("DeadlineArm: arrival probability must lie in [0, 1]");
  if (params_.max_deadline < 1 || params_.max_load < 1)
    throw std::invalid_argument("DeadlineArm: bounds must be positive");
}

std::vector<double> DeadlineArm::observation() const {
  return {static_cast<double>(d_) / params_.max_deadline,
          static_cast<double>(b_) / params_.max_load};
}

std::vector<double> DeadlineArm::raw_state() const {
  return {static_cast<double>(d_), static_cast<double>(b_)};
}

void DeadlineArm::validate(int d, int b) const {
  const bool empty_ok = (d == 0 && b == 0);
  const bool occupied_ok = d >= 1 && d <= params_.max_deadline && b >= 0 &&
                           b <= params_.max_load &&
                           !(d == params_.max_deadline && b == 0);
  if (!empty_ok && !occupied_ok)
    throw std::invalid_argument("DeadlineArm: state (" + std::to_string(d) + "," +
                                std::to_string(b) + ") outside the state space");
}

void DeadlineArm::set_raw_state(const std::vector<double>& s) {
  if (s.size() != 2) throw std::invalid_argument("DeadlineArm: state must be (D, B)");
  const int d = static_cast<int>(std::llround(s[0]));
  const int b = static_cast<int>(std::llround(s[1]));
  validate(d, b);
  d_ = d;
  b_ = b;
}

double DeadlineArm::reward(const DeadlineParams& p, int d, int b, Action action) {
  const int a = as_int(action);
  if (b > 0 && d > 1) return (1.0 - p.processing_cost) * a;
  if (b > 0 && d == 1) {
    const double remaining = b - a;
    return (1.0 - p.processing_cost) * a - p.penalty_coef * remaining * remaining;
  }
  return 0.0;
}

double DeadlineArm::step(Action a) {
  const double r = reward(params_, d_, b_, a);
  if (d_ > 1) {
    d_ -= 1;
    if (b_ > 0) b_ -= as_int(a);
  } else {
    // Deadline reached (or spot empty): redraw from the arrival law.
    if (rng_.bernoulli(params_.empty_arrival_prob)) {
      d_ = 0;
      b_ = 0;
    } else {
      const int occupied = state_count(params_) - 1;
      const auto s = state_from_index(params_, 1 + rng_.next_int(occupied));
      d_ = static_cast<int>(s[0]);
      b_ = static_cast<int>(s[1]);
    }
  }
  return r;
}

void DeadlineArm::reseed(uint64_t seed) { rng_ = RngStream(seed); }

std::vector<double> DeadlineArm::sample_initial_raw(RngStream& rng) const {
  return state_from_index(params_, rng.next_int(state_count(params_)));
}

int DeadlineArm::state_count(const DeadlineParams& p) {
  return 1 + p.max_deadline * (p.max_load + 1) - 1;
}

std::vector<double> DeadlineArm::state_from_index(const DeadlineParams& p, int idx) {
  if (idx == 0) return {0.0, 0.0};
  const int j = idx - 1;  // 0-based within occupied states
  const int per_row = p.max_load + 1;
  const int full_rows = (p.max_deadline - 1) * per_row;
  if (j < full_rows) {
    return {static_cast<double>(1 + j / per_row), static_cast<double>(j % per_row)};
  }
  // Last row D = max_deadline skips B = 0.
  return {static_cast<double>(p.max_deadline), static_cast<double>(j - full_rows + 1)};
}

int DeadlineArm::index_from_state(const DeadlineParams& p, int d, int b) {
  if (d == 0 && b == 0) return 0;
  const int per_row = p.max_load + 1;
  if (d < p.max_deadline) return 1 + (d - 1) * per_row + b;
  return 1 + (p.max_deadline - 1) * per_row + (b - 1);
}

}  // namespace neurwin
