#include "neurwin/noisy_arm.hpp"

#include <cstring>
#include <stdexcept>

namespace neurwin {

namespace {

uint64_t state_action_key(const std::vector<double>& state, Action a) {
  uint64_t key = 0x6e6f6973792d6172ULL;
  for (double c : state) {
    uint64_t bits;
    std::memcpy(&bits, &c, sizeof(bits));
    key = RngStream::mix64(key ^ bits);
  }
  return RngStream::mix64(key ^ static_cast<uint64_t>(as_int(a)));
}

}  // namespace

NoisyArm::NoisyArm(std::unique_ptr<ArmSimulator> inner, double noise_level,
                   uint64_t noise_seed)
    : inner_(std::move(inner)), noise_level_(noise_level), noise_seed_(noise_seed) {
  if (noise_level_ < 0.0)
    throw std::invalid_argument("NoisyArm: noise_level must be nonnegative");
}

double NoisyArm::factor(const std::vector<double>& state, Action a) {
  const uint64_t key = state_action_key(state, a);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  RngStream draw(noise_seed_, key);
  const double f = 1.0 + noise_level_ * draw.next_gaussian();
  memo_.emplace(key, f);
  return f;
}

double NoisyArm::step(Action a) {
  if (noise_level_ == 0.0) return inner_->step(a);
  const double f = factor(inner_->raw_state(), a);
  return f * inner_->step(a);
}

std::unique_ptr<ArmSimulator> noisy_wrapper(std::unique_ptr<ArmSimulator> arm,
                                            double noise_level, RngStream& rng) {
  return std::make_unique<NoisyArm>(std::move(arm), noise_level, rng.next_u64());
}

}  // namespace neurwin
