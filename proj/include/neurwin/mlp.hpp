#ifndef NEURWIN_MLP_HPP
#define NEURWIN_MLP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "neurwin/arm.hpp"
#include "neurwin/rng.hpp"

namespace neurwin {

using GradientVector = std::vector<double>;

// Fully connected index network f_theta: rectifier hidden layers,
// identity scalar output. Parameters live in one flat vector (weights
// row-major, then biases, layer by layer) so gradient accumulators and
// the optimizer can treat them uniformly.
class IndexNetwork {
 public:
  explicit IndexNetwork(std::vector<int> layer_sizes);

  // Weights uniform on +-1/sqrt(fan_in), biases zero.
  static IndexNetwork init(std::vector<int> layer_sizes, RngStream& rng);

  int input_dim() const { return layers_.front(); }
  int param_count() const { return static_cast<int>(params_.size()); }
  const std::vector<int>& layer_sizes() const { return layers_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  double forward(const std::vector<double>& input) const;

  // Retains per-layer activations for a following backward pass.
  struct Workspace {
    std::vector<std::vector<double>> activations;  // activations[0] = input
    double output = 0.0;
  };
  double forward(const std::vector<double>& input, Workspace& ws) const;

  // grad += coef * d f_theta / d theta, back-propagated through ws.
  void accumulate_output_grad(const Workspace& ws, double coef, GradientVector& grad) const;

  static int param_count_for(const std::vector<int>& layer_sizes);

 private:
  std::vector<int> layers_;
  std::vector<double> params_;
  std::vector<int> weight_offsets_;  // per layer: weights start; biases follow
};

// Gradient of the log-probability of the taken action under the
// sigmoid gate: d/df ln sigma_m(f - lambda) = m (1 - sigma_m), and
// d/df ln(1 - sigma_m(f - lambda)) = -m sigma_m. Always finite.
GradientVector grad_log_prob(const IndexNetwork& net, const std::vector<double>& input,
                             double lambda, double m, Action a);

// Scalar chain-rule coefficient used by grad_log_prob; exposed so the
// training loop can reuse a forward pass.
double log_prob_grad_coef(double index_value, double lambda, double m, Action a);

class AdamOptimizer {
 public:
  AdamOptimizer(int dim, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);

  // One bias-corrected step in the ascent direction of grad. Throws on
  // non-finite gradients, leaving the parameters unchanged.
  void ascend(std::vector<double>& params, const GradientVector& grad);

  int64_t step_count() const { return steps_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int64_t steps_ = 0;
  std::vector<double> m_, v_;
};

// Text checkpoint format:
//   NEURWIN-CKPT v1
//   <layer sizes, space separated>
//   <training episode count>
//   <one parameter per line, 17 significant digits>
struct Checkpoint {
  IndexNetwork net;
  int64_t episodes_trained = 0;
};

void save_checkpoint(const std::string& path, const IndexNetwork& net,
                     int64_t episodes_trained);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace neurwin

#endif  // NEURWIN_MLP_HPP
