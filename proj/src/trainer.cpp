#include "neurwin/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "neurwin/costed_env.hpp"

namespace neurwin {

void TrainingConfig::validate() const {
  if (discount <= 0.0 || discount >= 1.0)
    throw std::invalid_argument("TrainingConfig: discount must lie in (0, 1)");
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainingConfig: learning_rate <= 0");
  if (lr_decay <= 0.0 || lr_decay > 1.0)
    throw std::invalid_argument("TrainingConfig: lr_decay must lie in (0, 1]");
  if (sigmoid_m <= 0.0) throw std::invalid_argument("TrainingConfig: sigmoid_m <= 0");
  if (minibatch_size < 2)
    throw std::invalid_argument("TrainingConfig: minibatch_size must be >= 2");
  if (horizon < 1) throw std::invalid_argument("TrainingConfig: horizon must be >= 1");
  if (episodes < 0) throw std::invalid_argument("TrainingConfig: episodes < 0");
  if (checkpoint_interval < 1)
    throw std::invalid_argument("TrainingConfig: checkpoint_interval must be >= 1");
  if (layer_sizes.size() < 2 || layer_sizes.back() != 1)
    throw std::invalid_argument("TrainingConfig: layer_sizes must end in a single output");
}

namespace train_streams {

namespace {
enum Tag : uint64_t { kInit = 1, kArm = 2, kCtrl = 3, kExo = 4, kAction = 5 };
}

uint64_t init_seed(uint64_t seed) { return mix_seed(seed, {kInit}); }
uint64_t arm_seed(uint64_t seed) { return mix_seed(seed, {kArm}); }
uint64_t ctrl_seed(uint64_t seed, int64_t b) {
  return mix_seed(seed, {kCtrl, static_cast<uint64_t>(b)});
}
uint64_t exo_seed(uint64_t seed, int64_t b) {
  return mix_seed(seed, {kExo, static_cast<uint64_t>(b)});
}
uint64_t action_seed(uint64_t seed, int64_t b, int e) {
  return mix_seed(seed, {kAction, static_cast<uint64_t>(b), static_cast<uint64_t>(e)});
}

}  // namespace train_streams

EpisodeResult run_episode(const IndexNetwork& net, ArmSimulator& arm, double lambda,
                          const std::vector<double>& s1_raw, const TrainingConfig& cfg,
                          RngStream& action_rng) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("run_episode: lambda not finite");
  arm.set_raw_state(s1_raw);
  EpisodeResult result;
  result.grad_sum.assign(net.param_count(), 0.0);
  IndexNetwork::Workspace ws;
  double discount_t = 1.0;
  for (int t = 0; t < cfg.horizon; ++t) {
    if (arm.terminal()) break;
    const double f = net.forward(arm.observation(), ws);
    if (!std::isfinite(f))
      throw std::runtime_error("run_episode: index estimate went non-finite at t=" +
                               std::to_string(t));
    const CostedStepOutcome out =
        env_star_step(arm, f, lambda, cfg.sigmoid_m, action_rng);
    net.accumulate_output_grad(ws, log_prob_grad_coef(f, lambda, cfg.sigmoid_m, out.action_taken),
                               result.grad_sum);
    if (!std::isfinite(out.net_reward))
      throw std::runtime_error("run_episode: reward went non-finite at t=" +
                               std::to_string(t));
    result.discounted_net_reward += discount_t * out.net_reward;
    discount_t *= cfg.discount;
    if (cfg.record_traces) {
      result.actions.push_back(out.action_taken);
      result.rewards.push_back(out.net_reward + lambda * as_int(out.action_taken));
    }
  }
  return result;
}

MinibatchStats run_minibatch(IndexNetwork& net, AdamOptimizer& adam, ArmSimulator& arm,
                             const TrainingConfig& cfg, int64_t minibatch_index) {
  RngStream ctrl(train_streams::ctrl_seed(cfg.seed, minibatch_index));
  const std::vector<double> s0 = arm.sample_initial_raw(ctrl);
  const std::vector<double> s1 = arm.sample_initial_raw(ctrl);

  arm.set_raw_state(s0);
  const double lambda = net.forward(arm.observation());

  const uint64_t exo = train_streams::exo_seed(cfg.seed, minibatch_index);
  const int R = cfg.minibatch_size;
  std::vector<EpisodeResult> results;
  results.reserve(R);
  for (int e = 0; e < R; ++e) {
    arm.reseed(exo);
    RngStream action_rng(train_streams::action_seed(cfg.seed, minibatch_index, e));
    results.push_back(run_episode(net, arm, lambda, s1, cfg, action_rng));
  }

  MinibatchStats stats;
  stats.minibatch = minibatch_index;
  stats.lambda = lambda;
  stats.episode_returns.reserve(R);
  for (const auto& r : results) {
    stats.episode_returns.push_back(r.discounted_net_reward);
    stats.g_bar += r.discounted_net_reward / R;
  }

  GradientVector aggregate(net.param_count(), 0.0);
  for (int e = 0; e < R; ++e) {
    const double w = results[e].discounted_net_reward - stats.g_bar;
    const GradientVector& h = results[e].grad_sum;
    for (size_t i = 0; i < aggregate.size(); ++i) aggregate[i] += w * h[i];
  }
  adam.ascend(net.params(), aggregate);

  if (cfg.record_traces) stats.episodes = std::move(results);
  return stats;
}

TrainResult train(const ArmFactory& make_arm, const TrainingConfig& cfg,
                  const std::string& out_dir) {
  cfg.validate();
  const bool writing = !out_dir.empty();
  if (writing) std::filesystem::create_directories(out_dir);

  auto arm = make_arm(train_streams::arm_seed(cfg.seed));
  RngStream init_rng(train_streams::init_seed(cfg.seed));
  IndexNetwork net = IndexNetwork::init(cfg.layer_sizes, init_rng);
  AdamOptimizer adam(net.param_count(), cfg.learning_rate);

  TrainResult result{{}, {}, net, 0};

  auto emit = [&](const IndexNetwork& snapshot, int64_t episodes_done) {
    result.checkpoints.push_back(Checkpoint{snapshot, episodes_done});
    if (writing)
      save_checkpoint(out_dir + "/ckpt_" + std::to_string(episodes_done) + ".txt", snapshot,
                      episodes_done);
  };

  if (cfg.episodes == 0) {
    emit(net, 0);
    result.final_net = net;
    if (writing) write_training_log(out_dir + "/training_log.csv", result.log);
    return result;
  }

  const int64_t n_minibatches =
      (cfg.episodes + cfg.minibatch_size - 1) / cfg.minibatch_size;
  int64_t episodes_done = 0;
  int64_t next_mark = cfg.checkpoint_interval;
  for (int64_t b = 0; b < n_minibatches; ++b) {
    if (cfg.lr_decay != 1.0)
      adam.set_learning_rate(cfg.learning_rate *
                             std::pow(cfg.lr_decay, static_cast<double>(b)));
    MinibatchStats stats = run_minibatch(net, adam, *arm, cfg, b);
    episodes_done += cfg.minibatch_size;
    stats.episodes_done = episodes_done;
    result.log.push_back(std::move(stats));
    if (episodes_done >= next_mark) {
      emit(net, episodes_done);
      next_mark = cfg.checkpoint_interval * (episodes_done / cfg.checkpoint_interval + 1);
    }
  }
  result.final_net = net;
  result.episodes_trained = episodes_done;
  if (writing) write_training_log(out_dir + "/training_log.csv", result.log);
  return result;
}

void write_training_log(const std::string& path, const std::vector<MinibatchStats>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_training_log: cannot open " + path);
  out << "minibatch,episode,lambda,G_bar\n";
  char buf[128];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%.12g,%.12g\n",
                  static_cast<long long>(row.minibatch),
                  static_cast<long long>(row.episodes_done), row.lambda, row.g_bar);
    out << buf;
  }
  if (!out) throw std::runtime_error("write_training_log: write failed on " + path);
}

}  // namespace neurwin
