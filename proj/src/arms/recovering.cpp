#include "neurwin/arms/recovering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace neurwin {

RecoveringParams recovering_class_params(RecoveringClass c, int z_max) {
  switch (c) {
    case RecoveringClass::A: return {10.0, 0.2, z_max};
    case RecoveringClass::B: return {8.5, 0.4, z_max};
    case RecoveringClass::C: return {7.0, 0.6, z_max};
    case RecoveringClass::D: return {5.5, 0.8, z_max};
  }
  throw std::invalid_argument("recovering_class_params: unknown class");
}

RecoveringArm::RecoveringArm(RecoveringParams params, uint64_t /*seed*/)
    : params_(params) {
  if (params_.theta0 <= 0.0 || params_.theta1 <= 0.0)
    throw std::invalid_argument("RecoveringArm: recovery coefficients must be positive");
  if (params_.z_max < 1) throw std::invalid_argument("RecoveringArm: z_max must be >= 1");
}

std::vector<double> RecoveringArm::observation() const {
  return {static_cast<double>(z_) / params_.z_max};
}

std::vector<double> RecoveringArm::raw_state() const {
  return {static_cast<double>(z_)};
}

void RecoveringArm::set_raw_state(const std::vector<double>& s) {
  if (s.size() != 1) throw std::invalid_argument("RecoveringArm: state must be (z)");
  const int z = static_cast<int>(std::llround(s[0]));
  if (z < 1 || z > params_.z_max)
    throw std::invalid_argument("RecoveringArm: z = " + std::to_string(z) +
                                " outside [1, z_max]");
  z_ = z;
}

double RecoveringArm::recovery(const RecoveringParams& p, int z) {
  return p.theta0 * (1.0 - std::exp(-p.theta1 * z));
}

double RecoveringArm::step(Action a) {
  if (a == Action::Active) {
    const double r = recovery(params_, z_);
    z_ = 1;
    return r;
  }
  z_ = std::min(z_ + 1, params_.z_max);
  return 0.0;
}

void RecoveringArm::reseed(uint64_t /*seed*/) {}  // no exogenous randomness

std::vector<double> RecoveringArm::sample_initial_raw(RngStream& rng) const {
  // Pr{z} = 2^z / (2^1 + ... + 2^z_max), so z_max is drawn half the time.
  const double total = std::exp2(params_.z_max + 1) - 2.0;
  double u = rng.next_double() * total;
  for (int z = params_.z_max; z >= 1; --z) {
    const double w = std::exp2(z);
    if (u < w) return {static_cast<double>(z)};
    u -= w;
  }
  return {1.0};
}

}  // namespace neurwin
