#ifndef NEURWIN_ARMS_WIRELESS_HPP
#define NEURWIN_ARMS_WIRELESS_HPP

#include <cstdint>
#include <vector>

#include "neurwin/arm.hpp"

namespace neurwin {

struct WirelessParams {
  double holding_cost = 1.0;
  double rate_bad = 8400.0;     // r1, bits per activated round in a bad channel
  double rate_good = 33600.0;   // r2, bits per activated round in a good channel
  double good_prob = 0.75;      // q
  double max_load = 1.0e6;      // initial load drawn from (0, max_load]
};

// Wireless client arm: pays a unit holding cost each round until its
// remaining load y reaches 0. Activation transmits r2 bits in a good
// channel (v = 1) or r1 bits in a bad one; the channel flag is i.i.d.
// Bernoulli(q) each round. y = 0 is absorbing with reward 0.
class WirelessArm : public ArmSimulator {
 public:
  WirelessArm(WirelessParams params, uint64_t seed);

  int observation_dim() const override { return 2; }
  std::vector<double> observation() const override;
  std::vector<double> raw_state() const override;
  void set_raw_state(const std::vector<double>& s) override;
  double step(Action a) override;
  bool terminal() const override { return load_ <= 0.0; }
  void reseed(uint64_t seed) override;
  std::vector<double> sample_initial_raw(RngStream& rng) const override;

  const WirelessParams& params() const { return params_; }
  double load() const { return load_; }
  int channel() const { return good_channel_ ? 1 : 0; }

 private:
  WirelessParams params_;
  RngStream rng_;
  double load_ = 0.0;
  bool good_channel_ = false;
};

}  // namespace neurwin

#endif  // NEURWIN_ARMS_WIRELESS_HPP
