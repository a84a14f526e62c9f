#ifndef NEURWIN_ARMS_RECOVERING_HPP
#define NEURWIN_ARMS_RECOVERING_HPP

#include <cstdint>
#include <vector>

#include "neurwin/arm.hpp"

namespace neurwin {

enum class RecoveringClass { A, B, C, D };

struct RecoveringParams {
  double theta0 = 10.0;
  double theta1 = 0.2;
  int z_max = 20;
};

RecoveringParams recovering_class_params(RecoveringClass c, int z_max = 20);

// Recovering-reward arm: playing collects f(z) = theta0 * (1 - e^(-theta1 z))
// and resets the waiting time to 1; waiting grows z up to z_max.
// Fully deterministic.
class RecoveringArm : public ArmSimulator {
 public:
  RecoveringArm(RecoveringParams params, uint64_t seed = 0);

  int observation_dim() const override { return 1; }
  std::vector<double> observation() const override;
  std::vector<double> raw_state() const override;
  void set_raw_state(const std::vector<double>& s) override;
  double step(Action a) override;
  void reseed(uint64_t seed) override;
  std::vector<double> sample_initial_raw(RngStream& rng) const override;

  const RecoveringParams& params() const { return params_; }
  int waiting_time() const { return z_; }

  static double recovery(const RecoveringParams& p, int z);

 private:
  RecoveringParams params_;
  int z_ = 1;
};

}  // namespace neurwin

#endif  // NEURWIN_ARMS_RECOVERING_HPP
