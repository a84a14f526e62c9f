// Command-line front end: train index networks, evaluate index policies
// on N-arm instances, compute oracle index tables and D_s(lambda)
// curves, certify strong indexability, and run noisy-simulator sweeps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neurwin/config.hpp"
#include "neurwin/harness.hpp"
#include "neurwin/noisy_arm.hpp"

namespace {

using namespace neurwin;

struct CommonOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  KeyValueConfig file;

  void load() {
    if (!config_path.empty()) file = KeyValueConfig::load(config_path);
  }
  uint64_t resolve_seed(uint64_t fallback) const {
    if (seed) return *seed;
    if (auto v = file.get_u64("seed")) return *v;
    return fallback;
  }
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--config", common.config_path, "flat key = value config file");
  cmd->add_option("--seed", common.seed, "seed override");
}

template <typename T>
T resolve(const CLI::Option* opt, const T& flag_value, const KeyValueConfig& file,
          const std::string& key, const T& fallback) {
  if (opt->count() > 0) return flag_value;
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = file.get(key)) return *v;
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = file.get_double(key)) return static_cast<T>(*v);
  } else {
    if (auto v = file.get_int(key)) return static_cast<T>(*v);
  }
  return fallback;
}

std::vector<double> parse_levels(const std::string& csv) {
  std::vector<double> levels;
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t pos = csv.find(',', start);
    const std::string tok = csv.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!tok.empty()) levels.push_back(std::stod(tok));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return levels;
}

std::vector<std::string> parse_paths(const std::string& csv) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t pos = csv.find(',', start);
    const std::string tok = csv.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!tok.empty()) out.push_back(tok);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<int> parse_layers(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_levels(csv)) out.push_back(static_cast<int>(v));
  return out;
}

// Restricts an environment's type list by --class / --q selectors.
std::vector<ArmType> selected_types(EnvKind env, const std::string& cls, double q,
                                    bool q_set) {
  std::vector<ArmType> types = env_arm_types(env);
  if (env == EnvKind::Recovering && !cls.empty()) {
    const std::string want = "recovering_" + cls;
    std::vector<ArmType> keep;
    for (auto& t : types)
      if (t.label == want) keep.push_back(t);
    if (keep.empty()) throw std::invalid_argument("unknown recovering class '" + cls + "'");
    return keep;
  }
  if (env == EnvKind::Wireless && q_set) {
    std::vector<ArmType> keep;
    for (auto& t : types)
      if (t.wireless.good_prob == q) keep.push_back(t);
    if (keep.empty()) throw std::invalid_argument("no wireless type with q = " + std::to_string(q));
    return keep;
  }
  return types;
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double v = lo + k * step;
    if (v > hi + 1e-12) break;
    grid.push_back(v);
  }
  return grid;
}

void default_grid_for(EnvKind env, double& lo, double& hi, double& step) {
  if (env == EnvKind::Deadline) {
    lo = -1.0;
    hi = 2.0;
    step = 0.05;
  } else {
    lo = 0.0;
    hi = 12.0;
    step = 0.1;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"NeurWIN: Whittle index networks for restless bandits"};
  app.require_subcommand(1);

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train one index network");
  CommonOpts train_common;
  add_common(train_cmd, train_common);
  std::string t_env, t_class, t_out = "out", t_layers;
  double t_q = 0.75, t_discount = 0.99, t_lr = 0.001, t_lr_decay = 1.0, t_m = 0.0, t_noise = 0.0;
  int64_t t_episodes = -1, t_interval = -1;
  int t_horizon = 300, t_minibatch = 5;
  auto* t_env_opt = train_cmd->add_option("--env", t_env, "deadline|recovering|wireless");
  auto* t_class_opt = train_cmd->add_option("--class", t_class, "recovering class A|B|C|D");
  auto* t_q_opt = train_cmd->add_option("--q", t_q, "wireless good-channel probability");
  auto* t_ep_opt = train_cmd->add_option("--episodes", t_episodes, "training episodes");
  auto* t_hor_opt = train_cmd->add_option("--horizon", t_horizon, "episode horizon");
  auto* t_disc_opt = train_cmd->add_option("--discount", t_discount, "discount factor");
  auto* t_lr_opt = train_cmd->add_option("--learning-rate", t_lr, "Adam learning rate");
  auto* t_lrd_opt = train_cmd->add_option("--lr-decay", t_lr_decay, "per mini-batch learning-rate multiplier");
  auto* t_m_opt = train_cmd->add_option("--sigmoid-m", t_m, "sigmoid sensitivity");
  auto* t_mb_opt = train_cmd->add_option("--minibatch-size", t_minibatch, "episodes per mini-batch");
  auto* t_int_opt = train_cmd->add_option("--checkpoint-interval", t_interval, "episodes between checkpoints");
  auto* t_noise_opt = train_cmd->add_option("--noise", t_noise, "simulator noise level (reward RMSE fraction)");
  auto* t_layers_opt = train_cmd->add_option("--layer-sizes", t_layers, "comma separated, e.g. 2,16,32,1");
  auto* t_out_opt = train_cmd->add_option("--out", t_out, "output directory");

  // ---- evaluate ----
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate an index policy");
  CommonOpts eval_common;
  add_common(eval_cmd, eval_common);
  std::string e_env, e_policy, e_out = "out";
  int e_n = 4, e_m = 1, e_runs = 50, e_horizon = 300;
  double e_discount = 0.99;
  int64_t e_qwic_episodes = 2000;
  auto* e_env_opt = eval_cmd->add_option("--env", e_env, "deadline|recovering|wireless");
  auto* e_policy_opt = eval_cmd->add_option(
      "--policy", e_policy,
      "whittle-oracle|size-aware|lookahead:d=20|greedy|qwic|neurwin:ckpt=PATH[,PATH...]");
  auto* e_n_opt = eval_cmd->add_option("--n", e_n, "number of arms");
  auto* e_m_opt = eval_cmd->add_option("--m", e_m, "arms activated per round");
  auto* e_runs_opt = eval_cmd->add_option("--runs", e_runs, "independent runs");
  auto* e_hor_opt = eval_cmd->add_option("--horizon", e_horizon, "rounds per run");
  auto* e_disc_opt = eval_cmd->add_option("--discount", e_discount, "discount factor");
  auto* e_qwic_opt = eval_cmd->add_option("--qwic-episodes", e_qwic_episodes, "QWIC training episodes");
  auto* e_out_opt = eval_cmd->add_option("--out", e_out, "output directory");

  // ---- curve ----
  auto* curve_cmd = app.add_subcommand("curve", "reward vs training episodes from checkpoints");
  CommonOpts curve_common;
  add_common(curve_cmd, curve_common);
  std::string c_env, c_dirs, c_out = "out", c_baseline = "default";
  int c_n = 4, c_m = 1, c_runs = 50, c_horizon = 300;
  double c_discount = 0.99;
  auto* c_env_opt = curve_cmd->add_option("--env", c_env, "deadline|recovering|wireless");
  auto* c_dirs_opt = curve_cmd->add_option("--ckpt-dir", c_dirs,
                                           "checkpoint dir (comma list, one per arm type)");
  auto* c_n_opt = curve_cmd->add_option("--n", c_n, "number of arms");
  auto* c_m_opt = curve_cmd->add_option("--m", c_m, "arms activated per round");
  auto* c_runs_opt = curve_cmd->add_option("--runs", c_runs, "independent runs");
  auto* c_hor_opt = curve_cmd->add_option("--horizon", c_horizon, "rounds per run");
  auto* c_disc_opt = curve_cmd->add_option("--discount", c_discount, "discount factor");
  curve_cmd->add_option("--baseline-policy", c_baseline,
                        "policy spec for the reference line, or 'none'");
  auto* c_out_opt = curve_cmd->add_option("--out", c_out, "output directory");

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand("oracle", "index tables and D_s(lambda) curves");
  CommonOpts oracle_common;
  add_common(oracle_cmd, oracle_common);
  std::string o_env, o_class, o_out = "out";
  double o_q = 0.75, o_lo = 0.0, o_hi = 0.0, o_step = 0.0, o_tol = 1e-6, o_discount = 0.99;
  int o_horizon = 300, o_mc_states = 5, o_rollouts = 50;
  auto* o_env_opt = oracle_cmd->add_option("--env", o_env, "deadline|recovering|wireless");
  auto* o_class_opt = oracle_cmd->add_option("--class", o_class, "recovering class A|B|C|D");
  auto* o_q_opt = oracle_cmd->add_option("--q", o_q, "wireless good-channel probability");
  auto* o_lo_opt = oracle_cmd->add_option("--lambda-min", o_lo, "grid start");
  auto* o_hi_opt = oracle_cmd->add_option("--lambda-max", o_hi, "grid end");
  auto* o_step_opt = oracle_cmd->add_option("--lambda-step", o_step, "grid step");
  auto* o_tol_opt = oracle_cmd->add_option("--tol", o_tol, "index bisection tolerance");
  auto* o_disc_opt = oracle_cmd->add_option("--discount", o_discount, "discount factor");
  auto* o_hor_opt = oracle_cmd->add_option("--horizon", o_horizon, "DP horizon");
  oracle_cmd->add_option("--mc-states", o_mc_states, "wireless: sampled states for MC curves");
  oracle_cmd->add_option("--rollouts", o_rollouts, "wireless: MC rollouts per point");
  auto* o_out_opt = oracle_cmd->add_option("--out", o_out, "output directory");

  // ---- indexability ----
  auto* idx_cmd = app.add_subcommand("indexability", "strong indexability certification");
  CommonOpts idx_common;
  add_common(idx_cmd, idx_common);
  std::string i_env, i_class, i_out;
  double i_lo = 0.0, i_hi = 0.0, i_step = 0.0, i_discount = 0.99;
  int i_horizon = 300;
  auto* i_env_opt = idx_cmd->add_option("--env", i_env, "deadline|recovering");
  auto* i_class_opt = idx_cmd->add_option("--class", i_class, "recovering class A|B|C|D");
  auto* i_lo_opt = idx_cmd->add_option("--lambda-min", i_lo, "grid start");
  auto* i_hi_opt = idx_cmd->add_option("--lambda-max", i_hi, "grid end");
  auto* i_step_opt = idx_cmd->add_option("--lambda-step", i_step, "grid step");
  auto* i_disc_opt = idx_cmd->add_option("--discount", i_discount, "discount factor");
  auto* i_hor_opt = idx_cmd->add_option("--horizon", i_horizon, "DP horizon");
  auto* i_out_opt = idx_cmd->add_option("--out", i_out, "write D_s curves CSV here");

  // ---- noisy ----
  auto* noisy_cmd = app.add_subcommand("noisy", "train on noisy simulators, evaluate clean");
  CommonOpts noisy_common;
  add_common(noisy_cmd, noisy_common);
  std::string x_env, x_levels = "0,0.1,0.2,0.3,0.4", x_out = "out";
  int x_n = 4, x_m = 1, x_runs = 50, x_horizon = 300;
  double x_discount = 0.99;
  int64_t x_episodes = -1;
  auto* x_env_opt = noisy_cmd->add_option("--env", x_env, "deadline|recovering|wireless");
  auto* x_levels_opt = noisy_cmd->add_option("--levels", x_levels, "comma separated noise levels");
  auto* x_n_opt = noisy_cmd->add_option("--n", x_n, "number of arms");
  auto* x_m_opt = noisy_cmd->add_option("--m", x_m, "arms activated per round");
  auto* x_runs_opt = noisy_cmd->add_option("--runs", x_runs, "independent runs");
  auto* x_hor_opt = noisy_cmd->add_option("--horizon", x_horizon, "rounds per run");
  auto* x_disc_opt = noisy_cmd->add_option("--discount", x_discount, "discount factor");
  auto* x_ep_opt = noisy_cmd->add_option("--episodes", x_episodes, "training episodes per level");
  auto* x_out_opt = noisy_cmd->add_option("--out", x_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (train_cmd->parsed()) {
    train_common.load();
    const auto& file = train_common.file;
    const std::string env_name = resolve<std::string>(t_env_opt, t_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("train: --env is required");
    const EnvKind env = env_kind_from_string(env_name);
    const std::string cls = resolve<std::string>(t_class_opt, t_class, file, "class", "");
    const double q = resolve<double>(t_q_opt, t_q, file, "q", 0.75);
    const auto types = selected_types(env, cls, q, t_q_opt->count() > 0 || file.has("q"));

    TrainingConfig cfg = default_training_config(env);
    cfg.horizon = resolve<int>(t_hor_opt, t_horizon, file, "horizon", cfg.horizon);
    cfg.discount = resolve<double>(t_disc_opt, t_discount, file, "discount", cfg.discount);
    cfg.learning_rate = resolve<double>(t_lr_opt, t_lr, file, "learning_rate", cfg.learning_rate);
    cfg.lr_decay = resolve<double>(t_lrd_opt, t_lr_decay, file, "lr_decay", cfg.lr_decay);
    cfg.sigmoid_m = resolve<double>(t_m_opt, t_m, file, "sigmoid_m", cfg.sigmoid_m);
    cfg.minibatch_size = resolve<int>(t_mb_opt, t_minibatch, file, "minibatch_size", cfg.minibatch_size);
    cfg.episodes = resolve<int64_t>(t_ep_opt, t_episodes, file, "episodes", cfg.episodes);
    cfg.checkpoint_interval =
        resolve<int64_t>(t_int_opt, t_interval, file, "checkpoint_interval", cfg.checkpoint_interval);
    cfg.seed = train_common.resolve_seed(42);
    const std::string layers_csv = resolve<std::string>(t_layers_opt, t_layers, file, "layer_sizes", "");
    if (!layers_csv.empty()) {
      cfg.layer_sizes = parse_layers(layers_csv);
      cfg.layer_sizes.insert(cfg.layer_sizes.begin(), types.front().env == EnvKind::Recovering ? 1 : 2);
      cfg.layer_sizes.push_back(1);
    }
    const double noise = resolve<double>(t_noise_opt, t_noise, file, "noise", 0.0);
    const std::string out_root = resolve<std::string>(t_out_opt, t_out, file, "out", "out");

    for (const auto& type : types) {
      const std::string dir = out_root + "/" + type.label;
      const uint64_t factor_seed = mix_seed(cfg.seed, {0xFA, 0});
      ArmFactory factory = [&type, noise, factor_seed](uint64_t seed) {
        auto inner = make_arm(type, seed);
        if (noise == 0.0) return inner;
        return std::unique_ptr<ArmSimulator>(
            std::make_unique<NoisyArm>(std::move(inner), noise, factor_seed));
      };
      const TrainResult result = train(factory, cfg, dir);
      std::cout << type.label << ": trained " << result.episodes_trained << " episodes, "
                << result.checkpoints.size() << " checkpoint(s) in " << dir << "\n";
    }
    return 0;
  }

  if (eval_cmd->parsed()) {
    eval_common.load();
    const auto& file = eval_common.file;
    const std::string env_name = resolve<std::string>(e_env_opt, e_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("evaluate: --env is required");
    const std::string policy_spec =
        resolve<std::string>(e_policy_opt, e_policy, file, "policy", "");
    if (policy_spec.empty()) throw std::invalid_argument("evaluate: --policy is required");

    ExperimentConfig cfg;
    cfg.env = env_kind_from_string(env_name);
    cfg.n = resolve<int>(e_n_opt, e_n, file, "n", 4);
    cfg.m = resolve<int>(e_m_opt, e_m, file, "m", 1);
    cfg.runs = resolve<int>(e_runs_opt, e_runs, file, "runs", 50);
    cfg.horizon = resolve<int>(e_hor_opt, e_horizon, file, "horizon", 300);
    cfg.discount = resolve<double>(e_disc_opt, e_discount, file, "discount", 0.99);
    cfg.seed = eval_common.resolve_seed(42);
    const int64_t qwic_eps =
        resolve<int64_t>(e_qwic_opt, e_qwic_episodes, file, "qwic_episodes", 2000);
    const std::string out = resolve<std::string>(e_out_opt, e_out, file, "out", "out");

    auto policy = make_policy(policy_spec, cfg, qwic_eps);
    const EvalResult result = evaluate_policy(cfg, *policy);
    std::filesystem::create_directories(out);
    write_runs_csv(out + "/runs.csv", result);
    std::cout << "policy " << policy_spec << " on " << env_name << " (" << cfg.n << ","
              << cfg.m << "): mean " << format_double(result.mean) << " std "
              << format_double(result.stddev) << " over " << cfg.runs << " runs\n";
    return 0;
  }

  if (curve_cmd->parsed()) {
    curve_common.load();
    const auto& file = curve_common.file;
    const std::string env_name = resolve<std::string>(c_env_opt, c_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("curve: --env is required");
    const std::string dirs_csv = resolve<std::string>(c_dirs_opt, c_dirs, file, "ckpt_dir", "");
    if (dirs_csv.empty()) throw std::invalid_argument("curve: --ckpt-dir is required");

    ExperimentConfig cfg;
    cfg.env = env_kind_from_string(env_name);
    cfg.n = resolve<int>(c_n_opt, c_n, file, "n", 4);
    cfg.m = resolve<int>(c_m_opt, c_m, file, "m", 1);
    cfg.runs = resolve<int>(c_runs_opt, c_runs, file, "runs", 50);
    cfg.horizon = resolve<int>(c_hor_opt, c_horizon, file, "horizon", 300);
    cfg.discount = resolve<double>(c_disc_opt, c_discount, file, "discount", 0.99);
    cfg.seed = curve_common.resolve_seed(42);
    const std::string out = resolve<std::string>(c_out_opt, c_out, file, "out", "out");

    double baseline = 0.0;
    bool have_baseline = false;
    std::string baseline_spec = c_baseline;
    if (baseline_spec == "default") {
      switch (cfg.env) {
        case EnvKind::Deadline: baseline_spec = "whittle-oracle"; break;
        case EnvKind::Recovering: baseline_spec = "greedy"; break;
        case EnvKind::Wireless: baseline_spec = "size-aware"; break;
      }
    }
    if (baseline_spec != "none") {
      auto policy = make_policy(baseline_spec, cfg);
      baseline = evaluate_policy(cfg, *policy).mean;
      have_baseline = true;
    }

    const auto points = learning_curve(cfg, parse_paths(dirs_csv), out, baseline, have_baseline);
    std::cout << points.size() << " checkpoint generations evaluated; curve.csv and curve.svg in "
              << out << "\n";
    if (have_baseline)
      std::cout << "baseline " << baseline_spec << " mean " << format_double(baseline) << "\n";
    return 0;
  }

  if (oracle_cmd->parsed()) {
    oracle_common.load();
    const auto& file = oracle_common.file;
    const std::string env_name = resolve<std::string>(o_env_opt, o_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("oracle: --env is required");
    const EnvKind env = env_kind_from_string(env_name);
    double lo, hi, step;
    default_grid_for(env, lo, hi, step);
    lo = resolve<double>(o_lo_opt, o_lo, file, "lambda_min", lo);
    hi = resolve<double>(o_hi_opt, o_hi, file, "lambda_max", hi);
    step = resolve<double>(o_step_opt, o_step, file, "lambda_step", step);
    const double tol = resolve<double>(o_tol_opt, o_tol, file, "tol", 1e-6);
    const double discount = resolve<double>(o_disc_opt, o_discount, file, "discount", 0.99);
    const int horizon = resolve<int>(o_hor_opt, o_horizon, file, "horizon", 300);
    const std::string cls = resolve<std::string>(o_class_opt, o_class, file, "class", "");
    const double q = resolve<double>(o_q_opt, o_q, file, "q", 0.75);
    const std::string out = resolve<std::string>(o_out_opt, o_out, file, "out", "out");
    const uint64_t seed = oracle_common.resolve_seed(42);
    std::filesystem::create_directories(out);

    const auto types = selected_types(env, cls, q, o_q_opt->count() > 0 || file.has("q"));
    for (const auto& type : types) {
      if (env == EnvKind::Wireless) {
        // Simulation-only: MC D_s estimates on sampled states.
        RngStream pick(mix_seed(seed, {0x0C, 0}));
        WirelessArm arm(type.wireless, 0);
        const WirelessParams wp = type.wireless;
        auto index_fn = [wp](const std::vector<double>& raw) {
          if (raw[0] <= 0.0) return -1.0e300;
          if (raw[1] == 1.0) return wp.holding_cost * wp.rate_good / raw[0];
          return wp.holding_cost / (wp.good_prob * (wp.rate_good / wp.rate_bad - 1.0));
        };
        std::vector<DsCurve> curves;
        const auto grid = lambda_grid(lo, hi, step);
        for (int k = 0; k < o_mc_states; ++k) {
          DsCurve curve;
          curve.state = arm.sample_initial_raw(pick);
          curve.lambdas = grid;
          RngStream mc(mix_seed(seed, {0x0D, static_cast<uint64_t>(k)}));
          for (double lam : grid) {
            RngStream mc_point(mc.next_u64());
            const McQValues est =
                mc_q_values(arm, curve.state, lam, discount, horizon, o_rollouts, mc_point,
                            threshold_continuation(index_fn, lam));
            curve.values.push_back(est.q_act - est.q_pass);
          }
          curves.push_back(std::move(curve));
        }
        write_ds_curves_csv(out + "/ds_" + type.label + ".csv", curves, "y,v");
        std::cout << type.label << ": MC D_s curves for " << o_mc_states << " states in "
                  << out << "\n";
        continue;
      }
      const ArmModel model = env == EnvKind::Deadline ? deadline_model(type.deadline)
                                                      : recovering_model(type.recovering);
      const IndexTable table = whittle_table(model, discount, tol, horizon);
      write_index_table_csv(out + "/index_" + type.label + ".csv", model, table);
      const auto report = strong_indexability_check(model, lambda_grid(lo, hi, step),
                                                    discount, horizon);
      write_ds_curves_csv(out + "/ds_" + type.label + ".csv", report.curves,
                          env == EnvKind::Deadline ? "D,B" : "z");
      std::cout << type.label << ": index table (" << model.state_count()
                << " states) and D_s curves in " << out << "\n";
    }
    return 0;
  }

  if (idx_cmd->parsed()) {
    idx_common.load();
    const auto& file = idx_common.file;
    const std::string env_name = resolve<std::string>(i_env_opt, i_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("indexability: --env is required");
    const EnvKind env = env_kind_from_string(env_name);
    if (env == EnvKind::Wireless)
      throw std::invalid_argument(
          "indexability: wireless is simulation-only; use `oracle --env wireless` for MC "
          "D_s curves");
    double lo, hi, step;
    default_grid_for(env, lo, hi, step);
    lo = resolve<double>(i_lo_opt, i_lo, file, "lambda_min", lo);
    hi = resolve<double>(i_hi_opt, i_hi, file, "lambda_max", hi);
    step = resolve<double>(i_step_opt, i_step, file, "lambda_step", step);
    const double discount = resolve<double>(i_disc_opt, i_discount, file, "discount", 0.99);
    const int horizon = resolve<int>(i_hor_opt, i_horizon, file, "horizon", 300);
    const std::string cls = resolve<std::string>(i_class_opt, i_class, file, "class", "");
    const std::string out = resolve<std::string>(i_out_opt, i_out, file, "out", "");

    const auto types = selected_types(env, cls, 0.0, false);
    bool all_pass = true;
    for (const auto& type : types) {
      const ArmModel model = env == EnvKind::Deadline ? deadline_model(type.deadline)
                                                      : recovering_model(type.recovering);
      const auto report =
          strong_indexability_check(model, lambda_grid(lo, hi, step), discount, horizon);
      std::cout << type.label << ": " << (report.strongly_indexable ? "PASS" : "FAIL") << " ("
                << model.state_count() << " states, lambda in [" << format_double(lo) << ", "
                << format_double(hi) << "] step " << format_double(step) << ")\n";
      for (const auto& [s, lam] : report.violations) {
        std::cout << "  violation: state (";
        const auto& coords = model.states[s];
        for (size_t i = 0; i < coords.size(); ++i)
          std::cout << (i ? "," : "") << format_double(coords[i]);
        std::cout << ") at lambda " << format_double(lam) << "\n";
      }
      if (!report.strongly_indexable) all_pass = false;
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        write_ds_curves_csv(out + "/ds_" + type.label + ".csv", report.curves,
                            env == EnvKind::Deadline ? "D,B" : "z");
      }
    }
    std::cout << (all_pass ? "PASS" : "FAIL") << ": strict decrease of D_s(lambda) "
              << (all_pass ? "held" : "violated") << " across all checked states\n";
    return 0;
  }

  if (noisy_cmd->parsed()) {
    noisy_common.load();
    const auto& file = noisy_common.file;
    const std::string env_name = resolve<std::string>(x_env_opt, x_env, file, "env", "");
    if (env_name.empty()) throw std::invalid_argument("noisy: --env is required");

    ExperimentConfig cfg;
    cfg.env = env_kind_from_string(env_name);
    cfg.n = resolve<int>(x_n_opt, x_n, file, "n", 4);
    cfg.m = resolve<int>(x_m_opt, x_m, file, "m", 1);
    cfg.runs = resolve<int>(x_runs_opt, x_runs, file, "runs", 50);
    cfg.horizon = resolve<int>(x_hor_opt, x_horizon, file, "horizon", 300);
    cfg.discount = resolve<double>(x_disc_opt, x_discount, file, "discount", 0.99);
    cfg.seed = noisy_common.resolve_seed(42);

    TrainingConfig tcfg = default_training_config(cfg.env);
    tcfg.episodes = resolve<int64_t>(x_ep_opt, x_episodes, file, "episodes", tcfg.episodes);
    tcfg.horizon = cfg.horizon;
    tcfg.discount = cfg.discount;

    const std::string levels_csv =
        resolve<std::string>(x_levels_opt, x_levels, file, "noise_levels", x_levels);
    const std::string out = resolve<std::string>(x_out_opt, x_out, file, "out", "out");

    const auto points = noisy_sweep(cfg, tcfg, parse_levels(levels_csv), out);
    for (const auto& p : points)
      std::cout << "noise " << format_double(p.noise_level) << ": mean "
                << format_double(p.mean) << " std " << format_double(p.stddev) << "\n";
    std::cout << "noisy.csv in " << out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
