#ifndef NEURWIN_ARM_HPP
#define NEURWIN_ARM_HPP

#include <cstdint>
#include <vector>

#include "neurwin/rng.hpp"

namespace neurwin {

enum class Action : int { Passive = 0, Active = 1 };

inline int as_int(Action a) { return static_cast<int>(a); }

// Single restless arm simulator. Single-owner mutable object: safe to
// move between threads, never to share. States come in two forms:
//   raw state      — environment units, e.g. (D, B) or (y, v)
//   observation    — fixed-length vector with coordinates scaled to
//                    [0, 1], fed to the index network
class ArmSimulator {
 public:
  virtual ~ArmSimulator() = default;

  virtual int observation_dim() const = 0;
  virtual std::vector<double> observation() const = 0;
  virtual std::vector<double> raw_state() const = 0;
  virtual void set_raw_state(const std::vector<double>& s) = 0;

  // Advances one round and returns the raw reward r[t].
  virtual double step(Action a) = 0;

  // Absorbing state: stepping is a no-op with reward 0.
  virtual bool terminal() const { return false; }

  // Replaces the exogenous-randomness stream (arrivals, channel
  // states). Used to give every episode in a mini-batch the same
  // exogenous event sequence.
  virtual void reseed(uint64_t seed) = 0;

  // Draws an initial state from the environment's training law and
  // returns it in raw units (does not mutate the simulator).
  virtual std::vector<double> sample_initial_raw(RngStream& rng) const = 0;
};

struct StepOutcome {
  double reward = 0.0;
  std::vector<double> next_state;  // raw units
};

struct CostedStepOutcome {
  Action action_taken = Action::Passive;
  double net_reward = 0.0;         // r[t] - lambda * a[t]
  std::vector<double> next_state;  // raw units
};

}  // namespace neurwin

#endif  // NEURWIN_ARM_HPP
