#ifndef NEURWIN_COSTED_ENV_HPP
#define NEURWIN_COSTED_ENV_HPP

#include "neurwin/arm.hpp"
#include "neurwin/rng.hpp"

namespace neurwin {

// Activation probability 1 / (1 + exp(-m * x)) with sensitivity m > 0.
// Throws std::invalid_argument on non-finite x or m <= 0.
double sigmoid_gate(double x, double m);

// log(sigmoid_gate(x, m)), computed without underflow for large |x|.
double log_sigmoid_gate(double x, double m);

// One round of the sigmoid-gated costed environment: samples
// a = 1 w.p. sigmoid_gate(index_value - lambda, m), steps the arm and
// charges lambda per activation.
CostedStepOutcome env_star_step(ArmSimulator& arm, double index_value, double lambda,
                                double m, RngStream& rng);

// One round of the hard-threshold costed environment:
// a = 1(index_value >= lambda). Ties activate.
CostedStepOutcome env_hard_step(ArmSimulator& arm, double index_value, double lambda);

}  // namespace neurwin

#endif  // NEURWIN_COSTED_ENV_HPP
