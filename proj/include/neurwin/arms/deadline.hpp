#ifndef NEURWIN_ARMS_DEADLINE_HPP
#define NEURWIN_ARMS_DEADLINE_HPP

#include <cstdint>
#include <vector>

#include "neurwin/arm.hpp"

namespace neurwin {

struct DeadlineParams {
  double processing_cost = 0.5;   // c
  double penalty_coef = 0.2;      // F(x) = penalty_coef * x^2
  int max_deadline = 12;          // D upper bound
  int max_load = 9;               // B upper bound
  double empty_arrival_prob = 0.3;  // Q(0,0)
};

// Job-scheduling arm. A spot holds a job (D rounds to deadline, B units
// of remaining charge). Activation charges one unit for reward 1 - c;
// an expiring job is penalized by F(remaining charge). When the
// deadline passes the spot redraws a fresh job from the arrival law Q.
//
// State space: (0,0) plus the 119 occupied states
// {1..12} x {0..9} \ {(12,0)}; Q is uniform 0.7/119 over those 119.
class DeadlineArm : public ArmSimulator {
 public:
  DeadlineArm(DeadlineParams params, uint64_t seed);

  int observation_dim() const override { return 2; }
  std::vector<double> observation() const override;
  std::vector<double> raw_state() const override;
  void set_raw_state(const std::vector<double>& s) override;
  double step(Action a) override;
  void reseed(uint64_t seed) override;
  std::vector<double> sample_initial_raw(RngStream& rng) const override;

  const DeadlineParams& params() const { return params_; }
  int deadline() const { return d_; }
  int load() const { return b_; }

  // Enumeration of the 120-state space; index 0 is (0,0), indices
  // 1..119 are the occupied states ordered by (D, B).
  static int state_count(const DeadlineParams& p);
  static std::vector<double> state_from_index(const DeadlineParams& p, int idx);
  static int index_from_state(const DeadlineParams& p, int d, int b);

  static double reward(const DeadlineParams& p, int d, int b, Action a);

 private:
  void validate(int d, int b) const;

  DeadlineParams params_;
  RngStream rng_;
  int d_ = 0;
  int b_ = 0;
};

}  // namespace neurwin

#endif  // NEURWIN_ARMS_DEADLINE_HPP
