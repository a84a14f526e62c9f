#include "neurwin/costed_env.hpp"

#include <cmath>
#include <stdexcept>

namespace neurwin {

double sigmoid_gate(double x, double m) {
  if (!std::isfinite(x)) throw std::invalid_argument("sigmoid_gate: x must be finite");
  if (!std::isfinite(m) || m <= 0.0)
    throw std::invalid_argument("sigmoid_gate: m must be a positive finite real");
  const double z = m * x;
  // Evaluate through exp of a non-positive argument on either branch.
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid_gate(double x, double m) {
  if (!std::isfinite(x)) throw std::invalid_argument("log_sigmoid_gate: x must be finite");
  if (!std::isfinite(m) || m <= 0.0)
    throw std::invalid_argument("log_sigmoid_gate: m must be a positive finite real");
  const double z = m * x;
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

CostedStepOutcome env_star_step(ArmSimulator& arm, double index_value, double lambda,
                                double m, RngStream& rng) {
  const double p = sigmoid_gate(index_value - lambda, m);
  const Action a = rng.bernoulli(p) ? Action::Active : Action::Passive;
  CostedStepOutcome out;
  out.action_taken = a;
  const double reward = arm.step(a);
  out.net_reward = reward - lambda * as_int(a);
  out.next_state = arm.raw_state();
  return out;
}

CostedStepOutcome env_hard_step(ArmSimulator& arm, double index_value, double lambda) {
  const Action a = index_value >= lambda ? Action::Active : Action::Passive;
  CostedStepOutcome out;
  out.action_taken = a;
  const double reward = arm.step(a);
  out.net_reward = reward - lambda * as_int(a);
  out.next_state = arm.raw_state();
  return out;
}

}  // namespace neurwin
