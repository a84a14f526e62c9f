#include "neurwin/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "neurwin/costed_env.hpp"

namespace neurwin {

IndexNetwork::IndexNetwork(std::vector<int> layer_sizes) : layers_(std::move(layer_sizes)) {
  if (layers_.size() < 2) throw std::invalid_argument("IndexNetwork: need >= 2 layers");
  for (int n : layers_)
    if (n <= 0) throw std::invalid_argument("IndexNetwork: layer sizes must be positive");
  if (layers_.back() != 1)
    throw std::invalid_argument("IndexNetwork: output layer must have one neuron");
  int offset = 0;
  for (size_t l = 0; l + 1 < layers_.size(); ++l) {
    weight_offsets_.push_back(offset);
    offset += layers_[l] * layers_[l + 1] + layers_[l + 1];
  }
  params_.assign(offset, 0.0);
}

int IndexNetwork::param_count_for(const std::vector<int>& layer_sizes) {
  int n = 0;
  for (size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  return n;
}

IndexNetwork IndexNetwork::init(std::vector<int> layer_sizes, RngStream& rng) {
  IndexNetwork net(std::move(layer_sizes));
  for (size_t l = 0; l + 1 < net.layers_.size(); ++l) {
    const int fan_in = net.layers_[l];
    const int fan_out = net.layers_[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    double* w = net.params_.data() + net.weight_offsets_[l];
    for (int i = 0; i < fan_out * fan_in; ++i) w[i] = (2.0 * rng.next_double() - 1.0) * scale;
    // biases stay zero
  }
  return net;
}

double IndexNetwork::forward(const std::vector<double>& input) const {
  Workspace ws;
  return forward(input, ws);
}

double IndexNetwork::forward(const std::vector<double>& input, Workspace& ws) const {
  if (static_cast<int>(input.size()) != layers_.front())
    throw std::invalid_argument("IndexNetwork::forward: input dimension mismatch");
  const size_t n_layers = layers_.size();
  ws.activations.resize(n_layers);
  ws.activations[0] = input;
  for (size_t l = 0; l + 1 < n_layers; ++l) {
    const int n_in = layers_[l];
    const int n_out = layers_[l + 1];
    const double* w = params_.data() + weight_offsets_[l];
    const double* b = w + n_out * n_in;
    const std::vector<double>& in = ws.activations[l];
    std::vector<double>& out = ws.activations[l + 1];
    out.assign(n_out, 0.0);
    const bool hidden = l + 2 < n_layers;
    for (int i = 0; i < n_out; ++i) {
      double z = b[i];
      const double* row = w + i * n_in;
      for (int j = 0; j < n_in; ++j) z += row[j] * in[j];
      out[i] = hidden ? (z > 0.0 ? z : 0.0) : z;
    }
  }
  ws.output = ws.activations.back()[0];
  return ws.output;
}

void IndexNetwork::accumulate_output_grad(const Workspace& ws, double coef,
                                          GradientVector& grad) const {
  if (grad.size() != params_.size())
    throw std::invalid_argument("IndexNetwork: gradient accumulator size mismatch");
  const size_t n_layers = layers_.size();
  std::vector<double> delta{coef};
  for (size_t l = n_layers - 1; l-- > 0;) {
    const int n_in = layers_[l];
    const int n_out = layers_[l + 1];
    const double* w = params_.data() + weight_offsets_[l];
    double* gw = grad.data() + weight_offsets_[l];
    double* gb = gw + n_out * n_in;
    const std::vector<double>& in = ws.activations[l];
    for (int i = 0; i < n_out; ++i) {
      const double d = delta[i];
      double* grow = gw + i * n_in;
      for (int j = 0; j < n_in; ++j) grow[j] += d * in[j];
      gb[i] += d;
    }
    if (l == 0) break;
    std::vector<double> prev(n_in, 0.0);
    for (int j = 0; j < n_in; ++j) {
      if (in[j] <= 0.0) continue;  // rectifier subgradient 0 at and below 0
      double s = 0.0;
      for (int i = 0; i < n_out; ++i) s += delta[i] * w[i * n_in + j];
      prev[j] = s;
    }
    delta.swap(prev);
  }
}

double log_prob_grad_coef(double index_value, double lambda, double m, Action a) {
  const double sigma = sigmoid_gate(index_value - lambda, m);
  return a == Action::Active ? m * (1.0 - sigma) : -m * sigma;
}

GradientVector grad_log_prob(const IndexNetwork& net, const std::vector<double>& input,
                             double lambda, double m, Action a) {
  IndexNetwork::Workspace ws;
  const double f = net.forward(input, ws);
  GradientVector grad(net.param_count(), 0.0);
  net.accumulate_output_grad(ws, log_prob_grad_coef(f, lambda, m, a), grad);
  return grad;
}

AdamOptimizer::AdamOptimizer(int dim, double learning_rate, double beta1, double beta2,
                             double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon),
      m_(dim, 0.0), v_(dim, 0.0) {}

void AdamOptimizer::ascend(std::vector<double>& params, const GradientVector& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("AdamOptimizer: dimension mismatch");
  for (double g : grad)
    if (!std::isfinite(g)) throw std::invalid_argument("AdamOptimizer: non-finite gradient");
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  for (size_t i = 0; i < m_.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] += lr_ * m_hat / (std::sqrt(v_hat) + eps_);
  }
}

void save_checkpoint(const std::string& path, const IndexNetwork& net,
                     int64_t episodes_trained) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << "NEURWIN-CKPT v1\n";
  const auto& sizes = net.layer_sizes();
  for (size_t i = 0; i < sizes.size(); ++i) out << (i ? " " : "") << sizes[i];
  out << "\n" << episodes_trained << "\n";
  char buf[64];
  for (double p : net.params()) {
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed on " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != "NEURWIN-CKPT v1")
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  std::string sizes_line;
  std::getline(in, sizes_line);
  std::istringstream sizes_stream(sizes_line);
  std::vector<int> sizes;
  int n;
  while (sizes_stream >> n) sizes.push_back(n);
  int64_t episodes = 0;
  in >> episodes;
  IndexNetwork net(sizes);
  for (double& p : net.params())
    if (!(in >> p)) throw std::runtime_error("load_checkpoint: truncated " + path);
  return Checkpoint{std::move(net), episodes};
}

}  // namespace neurwin
