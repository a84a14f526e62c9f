#include "neurwin/arms/wireless.hpp"

#include <algorithm>
#include <stdexcept>

namespace neurwin {

WirelessArm::WirelessArm(WirelessParams params, uint64_t seed)
    : params_(params), rng_(seed) {
  if (!(params_.rate_bad > 0.0) || !(params_.rate_good > params_.rate_bad))
    throw std::invalid_argument("WirelessArm: need 0 < r1 < r2");
  if (params_.good_prob < 0.0 || params_.good_prob > 1.0)
    throw std::invalid_argument("WirelessArm: q must lie in [0, 1]");
  if (params_.max_load <= 0.0)
    throw std::invalid_argument("WirelessArm: max_load must be positive");
}

std::vector<double> WirelessArm::observation() const {
  return {load_ / params_.max_load, good_channel_ ? 1.0 : 0.0};
}

std::vector<double> WirelessArm::raw_state() const {
  return {load_, good_channel_ ? 1.0 : 0.0};
}

void WirelessArm::set_raw_state(const std::vector<double>& s) {
  if (s.size() != 2) throw std::invalid_argument("WirelessArm: state must be (y, v)");
  if (s[0] < 0.0 || s[0] > params_.max_load)
    throw std::invalid_argument("WirelessArm: load outside [0, max_load]");
  if (s[1] != 0.0 && s[1] != 1.0)
    throw std::invalid_argument("WirelessArm: channel flag must be 0 or 1");
  load_ = s[0];
  good_channel_ = s[1] == 1.0;
}

double WirelessArm::step(Action a) {
  if (terminal()) return 0.0;
  const double rate = good_channel_ ? params_.rate_good : params_.rate_bad;
  load_ = std::max(0.0, load_ - as_int(a) * rate);
  good_channel_ = rng_.bernoulli(params_.good_prob);
  return -params_.holding_cost;
}

void WirelessArm::reseed(uint64_t seed) { rng_ = RngStream(seed); }

std::vector<double> WirelessArm::sample_initial_raw(RngStream& rng) const {
  // Load uniform on (0, max_load]; channel Bernoulli(q).
  const double y = (1.0 - rng.next_double()) * params_.max_load;
  const double v = rng.bernoulli(params_.good_prob) ? 1.0 : 0.0;
  return {y, v};
}

}  // namespace neurwin
