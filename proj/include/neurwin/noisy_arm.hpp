#ifndef NEURWIN_NOISY_ARM_HPP
#define NEURWIN_NOISY_ARM_HPP

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "neurwin/arm.hpp"

namespace neurwin {

// Models a misspecified simulator: rewards are scaled by fixed factors
// (1 + G) with G ~ N(0, noise_level^2), one factor per (state, action)
// pair. Factors are derived from (noise_seed, state, action), so a pair
// always sees the same factor no matter when or how often it is
// visited, and reseed() (which replaces the inner arm's exogenous
// stream) leaves the misspecification untouched.
class NoisyArm : public ArmSimulator {
 public:
  NoisyArm(std::unique_ptr<ArmSimulator> inner, double noise_level, uint64_t noise_seed);

  int observation_dim() const override { return inner_->observation_dim(); }
  std::vector<double> observation() const override { return inner_->observation(); }
  std::vector<double> raw_state() const override { return inner_->raw_state(); }
  void set_raw_state(const std::vector<double>& s) override { inner_->set_raw_state(s); }
  double step(Action a) override;
  bool terminal() const override { return inner_->terminal(); }
  void reseed(uint64_t seed) override { inner_->reseed(seed); }
  std::vector<double> sample_initial_raw(RngStream& rng) const override {
    return inner_->sample_initial_raw(rng);
  }

  double factor(const std::vector<double>& state, Action a);

 private:
  std::unique_ptr<ArmSimulator> inner_;
  double noise_level_;
  uint64_t noise_seed_;
  std::unordered_map<uint64_t, double> memo_;
};

// noise_level is the std of the multiplicative Gaussian factors; the
// factor seed is drawn from rng at wrap time. Throws on negative noise.
std::unique_ptr<ArmSimulator> noisy_wrapper(std::unique_ptr<ArmSimulator> arm,
                                            double noise_level, RngStream& rng);

}  // namespace neurwin

#endif  // NEURWIN_NOISY_ARM_HPP
