#ifndef NEURWIN_TRAINER_HPP
#define NEURWIN_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "neurwin/arm.hpp"
#include "neurwin/mlp.hpp"
#include "neurwin/rng.hpp"

namespace neurwin {

struct TrainingConfig {
  std::vector<int> layer_sizes{2, 16, 32, 1};
  double discount = 0.99;          // beta
  double learning_rate = 0.001;    // L
  double lr_decay = 1.0;           // per mini-batch multiplier; 1 = constant L
  double sigmoid_m = 1.0;
  int minibatch_size = 5;          // R, episodes per mini-batch
  int horizon = 300;               // T
  int64_t episodes = 2000;
  int64_t checkpoint_interval = 10;
  uint64_t seed = 0;
  bool record_traces = false;

  void validate() const;
};

struct EpisodeResult {
  double discounted_net_reward = 0.0;  // G_e
  GradientVector grad_sum;             // h_e
  // Filled only when record_traces is set.
  std::vector<Action> actions;
  std::vector<double> rewards;  // raw rewards, before the lambda charge
};

struct MinibatchStats {
  int64_t minibatch = 0;
  int64_t episodes_done = 0;
  double lambda = 0.0;
  double g_bar = 0.0;
  std::vector<double> episode_returns;
  std::vector<EpisodeResult> episodes;  // only when record_traces
};

struct TrainResult {
  std::vector<Checkpoint> checkpoints;
  std::vector<MinibatchStats> log;
  IndexNetwork final_net;
  int64_t episodes_trained = 0;
};

using ArmFactory = std::function<std::unique_ptr<ArmSimulator>(uint64_t seed)>;

// Seed-mixing scheme for the independent streams a training run uses.
// Every episode in mini-batch b shares exo_seed(seed, b) (common random
// numbers for arrivals/channels) while drawing actions from its own
// action_seed stream.
namespace train_streams {
uint64_t init_seed(uint64_t seed);
uint64_t arm_seed(uint64_t seed);
uint64_t ctrl_seed(uint64_t seed, int64_t minibatch);
uint64_t exo_seed(uint64_t seed, int64_t minibatch);
uint64_t action_seed(uint64_t seed, int64_t minibatch, int episode);
}  // namespace train_streams

// One episode of Alg. 1's inner loop: reset to s1, gate actions through
// sigma_m(f_theta(s) - lambda), accumulate the log-probability gradient
// h_e and the discounted net reward G_e. Stops early on absorbing
// states. Throws if any intermediate value goes non-finite.
EpisodeResult run_episode(const IndexNetwork& net, ArmSimulator& arm, double lambda,
                          const std::vector<double>& s1_raw, const TrainingConfig& cfg,
                          RngStream& action_rng);

// One mini-batch: draw s0 and s1, fix lambda = f_theta(s0), run R
// common-random-number episodes from s1, and take a single Adam ascent
// step with gradient sum_e (G_e - G_bar) h_e.
MinibatchStats run_minibatch(IndexNetwork& net, AdamOptimizer& adam, ArmSimulator& arm,
                             const TrainingConfig& cfg, int64_t minibatch_index);

// Full training run. When out_dir is nonempty, writes ckpt_<n>.txt
// files and training_log.csv (columns minibatch,episode,lambda,G_bar)
// under it.
TrainResult train(const ArmFactory& make_arm, const TrainingConfig& cfg,
                  const std::string& out_dir = "");

void write_training_log(const std::string& path, const std::vector<MinibatchStats>& log);

}  // namespace neurwin

#endif  // NEURWIN_TRAINER_HPP
