#include "neurwin/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "neurwin/noisy_arm.hpp"

namespace neurwin {

namespace {

// Seed-mixing tags for evaluation streams; independent of everything
// the trainer uses.
enum EvalTag : uint64_t { kRunSeed = 11, kEvalExo = 12, kEvalInit = 13, kQwicSeed = 21,
                          kNoiseFactors = 31, kNoiseTrain = 32 };

}  // namespace

EnvKind env_kind_from_string(const std::string& name) {
  if (name == "deadline") return EnvKind::Deadline;
  if (name == "recovering") return EnvKind::Recovering;
  if (name == "wireless") return EnvKind::Wireless;
  throw std::invalid_argument("unknown environment '" + name + "'");
}

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::Deadline: return "deadline";
    case EnvKind::Recovering: return "recovering";
    case EnvKind::Wireless: return "wireless";
  }
  return "?";
}

std::vector<ArmType> env_arm_types(EnvKind kind) {
  std::vector<ArmType> types;
  switch (kind) {
    case EnvKind::Deadline: {
      ArmType t;
      t.env = kind;
      t.label = "deadline";
      types.push_back(t);
      break;
    }
    case EnvKind::Recovering: {
      const char* names = "ABCD";
      for (int c = 0; c < 4; ++c) {
        ArmType t;
        t.env = kind;
        t.recovering = recovering_class_params(static_cast<RecoveringClass>(c));
        t.label = std::string("recovering_") + names[c];
        types.push_back(t);
      }
      break;
    }
    case EnvKind::Wireless: {
      ArmType good;
      good.env = kind;
      good.wireless.good_prob = 0.75;
      good.label = "wireless_q75";
      ArmType bad;
      bad.env = kind;
      bad.wireless.good_prob = 0.10;
      bad.label = "wireless_q10";
      types.push_back(good);
      types.push_back(bad);
      break;
    }
  }
  return types;
}

std::vector<int> arm_mix(EnvKind kind, int n) {
  std::vector<int> mix;
  mix.reserve(n);
  switch (kind) {
    case EnvKind::Deadline:
      mix.assign(n, 0);
      break;
    case EnvKind::Recovering: {
      // Quarters; earlier classes take the remainder ((10,1) -> 3,3,2,2).
      const int base = n / 4, rem = n % 4;
      for (int t = 0; t < 4; ++t)
        for (int k = 0; k < base + (t < rem ? 1 : 0); ++k) mix.push_back(t);
      break;
    }
    case EnvKind::Wireless: {
      const int good = (n + 1) / 2;
      for (int i = 0; i < n; ++i) mix.push_back(i < good ? 0 : 1);
      break;
    }
  }
  return mix;
}

std::unique_ptr<ArmSimulator> make_arm(const ArmType& type, uint64_t seed) {
  switch (type.env) {
    case EnvKind::Deadline: return std::make_unique<DeadlineArm>(type.deadline, seed);
    case EnvKind::Recovering: return std::make_unique<RecoveringArm>(type.recovering, seed);
    case EnvKind::Wireless: return std::make_unique<WirelessArm>(type.wireless, seed);
  }
  throw std::logic_error("make_arm: bad env");
}

TrainingConfig default_training_config(EnvKind kind) {
  TrainingConfig cfg;
  switch (kind) {
    case EnvKind::Deadline:
      cfg.layer_sizes = {2, 16, 32, 1};
      cfg.sigmoid_m = 1.0;
      cfg.episodes = 2000;
      cfg.checkpoint_interval = 10;
      break;
    case EnvKind::Recovering:
      cfg.layer_sizes = {1, 16, 32, 1};
      cfg.sigmoid_m = 5.0;
      cfg.episodes = 30000;
      cfg.checkpoint_interval = 100;
      break;
    case EnvKind::Wireless:
      cfg.layer_sizes = {2, 16, 32, 1};
      cfg.sigmoid_m = 0.75;
      cfg.episodes = 30000;
      cfg.checkpoint_interval = 1000;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ExperimentConfig: n must be >= 1");
  if (m < 1 || m > n) throw std::invalid_argument("ExperimentConfig: need 1 <= m <= n");
  if (horizon < 1) throw std::invalid_argument("ExperimentConfig: horizon must be >= 1");
  if (discount <= 0.0 || discount >= 1.0)
    throw std::invalid_argument("ExperimentConfig: discount must lie in (0, 1)");
  if (runs < 1) throw std::invalid_argument("ExperimentConfig: runs must be >= 1");
}

std::vector<int> IndexPolicy::select(const std::vector<const ArmSimulator*>& arms, int m) {
  std::vector<int> candidates;
  std::vector<double> indices;
  for (int i = 0; i < static_cast<int>(arms.size()); ++i) {
    if (arms[i]->terminal()) continue;  // finished arms are never scheduled
    candidates.push_back(i);
    indices.push_back(index_of(type_of_arm_[i], *arms[i]));
  }
  const int take = std::min<int>(m, static_cast<int>(candidates.size()));
  std::vector<int> picked = top_m_by_index(indices, take);
  std::vector<int> out;
  out.reserve(picked.size());
  for (int p : picked) out.push_back(candidates[p]);
  return out;
}

NeurwinPolicy::NeurwinPolicy(std::vector<int> type_of_arm, std::vector<IndexNetwork> nets)
    : IndexPolicy(std::move(type_of_arm)), nets_(std::move(nets)) {}

double NeurwinPolicy::index_of(int type_id, const ArmSimulator& arm) const {
  return nets_[type_id].forward(arm.observation());
}

WhittleOraclePolicy::WhittleOraclePolicy(std::vector<int> type_of_arm,
                                         std::vector<ArmModel> models,
                                         std::vector<IndexTable> tables)
    : IndexPolicy(std::move(type_of_arm)) {
  for (size_t t = 0; t < models.size(); ++t) {
    std::unordered_map<uint64_t, double> by_state;
    by_state.reserve(models[t].states.size());
    for (size_t s = 0; s < models[t].states.size(); ++s)
      by_state.emplace(state_key(models[t].states[s]), tables[t].whittle[s]);
    index_by_state_.push_back(std::move(by_state));
  }
}

double WhittleOraclePolicy::index_of(int type_id, const ArmSimulator& arm) const {
  const auto& by_state = index_by_state_[type_id];
  const auto it = by_state.find(state_key(arm.raw_state()));
  if (it == by_state.end())
    throw std::invalid_argument("WhittleOraclePolicy: state not in table");
  return it->second;
}

std::vector<int> SizeAwarePolicy::select(const std::vector<const ArmSimulator*>& arms, int m) {
  std::vector<WirelessArmView> views(arms.size());
  for (size_t i = 0; i < arms.size(); ++i) {
    const auto raw = arms[i]->raw_state();
    views[i].load = raw[0];
    views[i].channel = static_cast<int>(raw[1]);
    views[i].holding_cost = params_[i].holding_cost;
    views[i].rate_bad = params_[i].rate_bad;
    views[i].rate_good = params_[i].rate_good;
    views[i].good_prob = params_[i].good_prob;
  }
  return size_aware_policy(views, m);
}

LookaheadPolicy::LookaheadPolicy(std::vector<RecoveringParams> params_of_arm, int depth,
                                 int beam_width)
    : params_(std::move(params_of_arm)), depth_(depth), beam_width_(beam_width) {}

void LookaheadPolicy::begin_run(const std::vector<const ArmSimulator*>& /*arms*/) {
  plan_.choices.clear();
  position_ = 0;
}

std::vector<int> LookaheadPolicy::select(const std::vector<const ArmSimulator*>& arms, int m) {
  if (m != 1) throw std::invalid_argument("lookahead policy supports M = 1 only");
  if (position_ >= static_cast<int>(plan_.choices.size())) {
    std::vector<int> zs;
    zs.reserve(arms.size());
    for (const auto* a : arms) zs.push_back(static_cast<int>(a->raw_state()[0]));
    plan_ = lookahead_policy(zs, params_, depth_, beam_width_);
    position_ = 0;
  }
  return {plan_.choices[position_++]};
}

QwicPolicy::QwicPolicy(std::vector<int> type_of_arm, std::vector<QwicResult> results)
    : IndexPolicy(std::move(type_of_arm)) {
  for (const auto& r : results) {
    std::unordered_map<uint64_t, double> by_state;
    by_state.reserve(r.states.size());
    for (size_t s = 0; s < r.states.size(); ++s)
      by_state.emplace(state_key(r.states[s]), r.index[s]);
    index_by_state_.push_back(std::move(by_state));
  }
}

double QwicPolicy::index_of(int type_id, const ArmSimulator& arm) const {
  const auto& by_state = index_by_state_[type_id];
  const auto it = by_state.find(state_key(arm.raw_state()));
  if (it == by_state.end()) throw std::invalid_argument("QwicPolicy: state not in table");
  return it->second;
}

EvalResult evaluate_policy(const ExperimentConfig& config, Policy& policy) {
  config.validate();
  const auto types = env_arm_types(config.env);
  const auto mix = arm_mix(config.env, config.n);

  EvalResult result;
  result.runs.reserve(config.runs);
  for (int run = 0; run < config.runs; ++run) {
    std::vector<std::unique_ptr<ArmSimulator>> arms;
    std::vector<const ArmSimulator*> views;
    arms.reserve(config.n);
    for (int i = 0; i < config.n; ++i) {
      auto arm = make_arm(types[mix[i]],
                          mix_seed(config.seed, {kEvalExo, static_cast<uint64_t>(run),
                                                 static_cast<uint64_t>(i)}));
      switch (config.env) {
        case EnvKind::Deadline:
          arm->set_raw_state({0.0, 0.0});
          break;
        case EnvKind::Recovering:
          arm->set_raw_state({1.0});
          break;
        case EnvKind::Wireless: {
          // Per-run loads, identical whatever policy is being tested.
          RngStream init(mix_seed(config.seed, {kEvalInit, static_cast<uint64_t>(run),
                                                static_cast<uint64_t>(i)}));
          arm->set_raw_state(arm->sample_initial_raw(init));
          break;
        }
      }
      arms.push_back(std::move(arm));
    }
    for (const auto& a : arms) views.push_back(a.get());

    policy.begin_run(views);
    RunRecord record;
    record.run = run;
    record.seed = mix_seed(config.seed, {kRunSeed, static_cast<uint64_t>(run)});
    record.per_arm_discounted.assign(config.n, 0.0);

    std::vector<char> active(config.n, 0);
    double disc = 1.0;
    for (int t = 0; t < config.horizon; ++t) {
      bool all_done = true;
      for (const auto& a : arms)
        if (!a->terminal()) {
          all_done = false;
          break;
        }
      if (all_done) break;

      const std::vector<int> picked = policy.select(views, config.m);
      if (static_cast<int>(picked.size()) > config.m)
        throw std::logic_error("policy selected more than M arms");
      std::fill(active.begin(), active.end(), 0);
      for (int id : picked) {
        if (id < 0 || id >= config.n) throw std::logic_error("policy selected a bad arm id");
        if (arms[id]->terminal()) throw std::logic_error("policy selected a finished arm");
        active[id] = 1;
      }
      for (int i = 0; i < config.n; ++i) {
        const double r = arms[i]->step(active[i] ? Action::Active : Action::Passive);
        record.per_arm_discounted[i] += disc * r;
        record.total_discounted_reward += disc * r;
      }
      disc *= config.discount;
    }
    result.runs.push_back(std::move(record));
  }

  double sum = 0.0;
  for (const auto& r : result.runs) sum += r.total_discounted_reward;
  result.mean = sum / config.runs;
  if (config.runs > 1) {
    double ss = 0.0;
    for (const auto& r : result.runs) {
      const double d = r.total_discounted_reward - result.mean;
      ss += d * d;
    }
    result.stddev = std::sqrt(ss / (config.runs - 1));
  }
  return result;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& spec, const ExperimentConfig& config,
                                    int64_t qwic_episodes) {
  const auto types = env_arm_types(config.env);
  const auto mix = arm_mix(config.env, config.n);
  const size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

  auto build_models = [&]() {
    std::vector<ArmModel> models;
    for (const auto& t : types)
      models.push_back(config.env == EnvKind::Deadline ? deadline_model(t.deadline)
                                                       : recovering_model(t.recovering));
    return models;
  };

  if (name == "whittle-oracle") {
    if (config.env == EnvKind::Wireless)
      throw std::invalid_argument("whittle-oracle: wireless has no exact oracle");
    auto models = build_models();
    std::vector<IndexTable> tables;
    for (const auto& model : models)
      tables.push_back(whittle_table(model, config.discount, 1e-6, config.horizon));
    return std::make_unique<WhittleOraclePolicy>(mix, std::move(models), std::move(tables));
  }
  if (name == "size-aware") {
    if (config.env != EnvKind::Wireless)
      throw std::invalid_argument("size-aware: wireless environments only");
    std::vector<WirelessParams> params;
    for (int t : mix) params.push_back(types[t].wireless);
    return std::make_unique<SizeAwarePolicy>(std::move(params));
  }
  if (name == "lookahead" || name == "greedy") {
    if (config.env != EnvKind::Recovering)
      throw std::invalid_argument(name + ": recovering environments only");
    int depth = name == "greedy" ? 1 : 20;
    int beam = 64;
    if (!args.empty()) {
      for (const auto& kv : split(args, ',')) {
        const auto parts = split(kv, '=');
        if (parts.size() != 2) throw std::invalid_argument("bad policy argument '" + kv + "'");
        if (parts[0] == "d")
          depth = std::stoi(parts[1]);
        else if (parts[0] == "beam")
          beam = std::stoi(parts[1]);
        else
          throw std::invalid_argument("unknown policy argument '" + parts[0] + "'");
      }
    }
    std::vector<RecoveringParams> params;
    for (int t : mix) params.push_back(types[t].recovering);
    return std::make_unique<LookaheadPolicy>(std::move(params), depth, beam);
  }
  if (name == "qwic") {
    if (config.env == EnvKind::Wireless)
      throw std::invalid_argument("qwic: state space too large for tabular learning");
    auto models = build_models();
    std::vector<QwicResult> results;
    for (size_t t = 0; t < types.size(); ++t) {
      const IndexTable table = whittle_table(models[t], config.discount, 1e-4, config.horizon);
      QwicConfig qcfg;
      qcfg.episodes = qwic_episodes;
      qcfg.horizon = config.horizon;
      qcfg.discount = config.discount;
      qcfg.seed = mix_seed(config.seed, {kQwicSeed, static_cast<uint64_t>(t)});
      auto arm = make_arm(types[t], qcfg.seed);
      results.push_back(qwic_train(*arm, models[t], qwic_default_candidates(table), qcfg));
    }
    return std::make_unique<QwicPolicy>(mix, std::move(results));
  }
  if (name == "neurwin") {
    std::string ckpt_arg;
    for (const auto& kv : split(args, ',')) {
      // all comma-separated parts after "ckpt=" are checkpoint paths
      if (kv.rfind("ckpt=", 0) == 0)
        ckpt_arg = args.substr(args.find("ckpt=") + 5);
    }
    if (ckpt_arg.empty())
      throw std::invalid_argument("neurwin policy needs ckpt=PATH[,PATH...]");
    const auto paths = split(ckpt_arg, ',');
    if (paths.size() != types.size())
      throw std::invalid_argument("neurwin: expected " + std::to_string(types.size()) +
                                  " checkpoint(s) for " + to_string(config.env) + ", got " +
                                  std::to_string(paths.size()));
    std::vector<IndexNetwork> nets;
    for (const auto& p : paths) nets.push_back(load_checkpoint(p).net);
    return std::make_unique<NeurwinPolicy>(mix, std::move(nets));
  }
  throw std::invalid_argument("unknown policy '" + name + "'");
}

namespace {

std::vector<std::pair<int64_t, std::string>> list_checkpoints(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<int64_t, std::string>> found;
  if (!fs::is_directory(dir))
    throw std::runtime_error("checkpoint directory not found: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string fname = entry.path().filename().string();
    if (fname.rfind("ckpt_", 0) != 0 || fname.size() < 10) continue;
    if (fname.substr(fname.size() - 4) != ".txt") continue;
    const std::string digits = fname.substr(5, fname.size() - 9);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      continue;
    found.emplace_back(std::stoll(digits), entry.path().string());
  }
  std::sort(found.begin(), found.end());
  if (found.empty()) throw std::runtime_error("no checkpoints found in " + dir);
  return found;
}

}  // namespace

std::vector<CurvePoint> learning_curve(const ExperimentConfig& config,
                                       const std::vector<std::string>& ckpt_dirs,
                                       const std::string& out_dir, double baseline_mean,
                                       bool have_baseline) {
  const auto types = env_arm_types(config.env);
  if (ckpt_dirs.size() != types.size())
    throw std::invalid_argument("learning_curve: expected one checkpoint directory per arm "
                                "type (" +
                                std::to_string(types.size()) + ")");

  std::vector<std::vector<std::pair<int64_t, std::string>>> per_type;
  for (const auto& dir : ckpt_dirs) per_type.push_back(list_checkpoints(dir));

  // Intersect the episode counts available for every type.
  std::vector<int64_t> episodes;
  for (const auto& [ep, path] : per_type[0]) {
    bool everywhere = true;
    for (size_t t = 1; t < per_type.size() && everywhere; ++t) {
      everywhere = std::any_of(per_type[t].begin(), per_type[t].end(),
                               [ep = ep](const auto& e) { return e.first == ep; });
    }
    if (everywhere) episodes.push_back(ep);
  }
  if (episodes.empty())
    throw std::runtime_error("learning_curve: no common checkpoint episode counts");

  const auto mix = arm_mix(config.env, config.n);
  std::vector<CurvePoint> points;
  for (const int64_t ep : episodes) {
    std::vector<IndexNetwork> nets;
    for (const auto& ckpts : per_type) {
      const auto it = std::find_if(ckpts.begin(), ckpts.end(),
                                   [&](const auto& e) { return e.first == ep; });
      nets.push_back(load_checkpoint(it->second).net);
    }
    NeurwinPolicy policy(mix, std::move(nets));
    const EvalResult eval = evaluate_policy(config, policy);
    points.push_back({ep, eval.mean, eval.stddev});
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_curve_csv(out_dir + "/curve.csv", points);
    write_curve_svg(out_dir + "/curve.svg", points, baseline_mean, have_baseline);
  }
  return points;
}

std::vector<NoisePoint> noisy_sweep(const ExperimentConfig& config,
                                    const TrainingConfig& train_cfg,
                                    const std::vector<double>& noise_levels,
                                    const std::string& out_dir) {
  if (noise_levels.empty()) throw std::invalid_argument("noisy_sweep: empty noise level list");
  for (double level : noise_levels)
    if (level < 0.0) throw std::invalid_argument("noisy_sweep: negative noise level");

  const auto types = env_arm_types(config.env);
  const auto mix = arm_mix(config.env, config.n);

  std::vector<NoisePoint> points;
  for (size_t li = 0; li < noise_levels.size(); ++li) {
    const double level = noise_levels[li];
    std::vector<IndexNetwork> nets;
    for (size_t t = 0; t < types.size(); ++t) {
      TrainingConfig cfg = train_cfg;
      cfg.layer_sizes = default_training_config(config.env).layer_sizes;
      cfg.seed = mix_seed(config.seed, {kNoiseTrain, static_cast<uint64_t>(t)});
      // The misspecified simulator is one fixed object per (level, type).
      const uint64_t factor_seed =
          mix_seed(config.seed, {kNoiseFactors, static_cast<uint64_t>(li),
                                 static_cast<uint64_t>(t)});
      const ArmType type = types[t];
      ArmFactory factory = [&type, level, factor_seed](uint64_t seed) {
        auto inner = make_arm(type, seed);
        if (level == 0.0) return inner;
        return std::unique_ptr<ArmSimulator>(
            std::make_unique<NoisyArm>(std::move(inner), level, factor_seed));
      };
      nets.push_back(train(factory, cfg).final_net);
    }
    NeurwinPolicy policy(mix, std::move(nets));
    const EvalResult eval = evaluate_policy(config, policy);  // clean arms
    points.push_back({level, eval.mean, eval.stddev});
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_noise_csv(out_dir + "/noisy.csv", points);
  }
  return points;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_runs_csv(const std::string& path, const EvalResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "run,seed,total_discounted_reward\n";
  for (const auto& r : result.runs)
    out << r.run << "," << r.seed << "," << format_double(r.total_discounted_reward) << "\n";
  if (!out) throw std::runtime_error("write failed on " + path);
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "episodes_trained,mean_reward,std_reward\n";
  for (const auto& p : points)
    out << p.episodes << "," << format_double(p.mean) << "," << format_double(p.stddev)
        << "\n";
  if (!out) throw std::runtime_error("write failed on " + path);
}

void write_noise_csv(const std::string& path, const std::vector<NoisePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "noise_level,mean_reward,std_reward\n";
  for (const auto& p : points)
    out << format_double(p.noise_level) << "," << format_double(p.mean) << ","
        << format_double(p.stddev) << "\n";
  if (!out) throw std::runtime_error("write failed on " + path);
}

namespace {

std::string coord_header(const ArmModel& model) {
  if (model.name == "deadline") return "D,B";
  if (model.name == "recovering") return "z";
  std::string h;
  for (size_t i = 0; i < model.states.front().size(); ++i) {
    if (i) h += ",";
    h += "s" + std::to_string(i);
  }
  return h;
}

}  // namespace

void write_index_table_csv(const std::string& path, const ArmModel& model,
                           const IndexTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << coord_header(model) << ",whittle_index\n";
  for (size_t s = 0; s < table.states.size(); ++s) {
    for (double c : table.states[s]) out << format_double(c) << ",";
    out << format_double(table.whittle[s]) << "\n";
  }
  if (!out) throw std::runtime_error("write failed on " + path);
}

void write_ds_curves_csv(const std::string& path, const std::vector<DsCurve>& curves,
                         const std::string& coord_header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << coord_header << ",lambda,d_s\n";
  for (const auto& curve : curves)
    for (size_t k = 0; k < curve.lambdas.size(); ++k) {
      for (double c : curve.state) out << format_double(c) << ",";
      out << format_double(curve.lambdas[k]) << "," << format_double(curve.values[k]) << "\n";
    }
  if (!out) throw std::runtime_error("write failed on " + path);
}

void write_curve_svg(const std::string& path, const std::vector<CurvePoint>& points,
                     double baseline_mean, bool have_baseline) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const int width = 720, height = 440, margin = 60;
  double x_min = points.front().episodes, x_max = points.back().episodes;
  if (x_max <= x_min) x_max = x_min + 1;
  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  for (const auto& p : points) {
    y_min = std::min(y_min, p.mean - p.stddev);
    y_max = std::max(y_max, p.mean + p.stddev);
  }
  if (have_baseline) {
    y_min = std::min(y_min, baseline_mean);
    y_max = std::max(y_max, baseline_mean);
  }
  if (y_max <= y_min) y_max = y_min + 1;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;
  auto sx = [&](double x) {
    return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
  };
  auto sy = [&](double y) {
    return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"13\">training episodes</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << height / 2 << ")\">mean discounted reward</text>\n";

  if (have_baseline) {
    out << "<line x1=\"" << margin << "\" y1=\"" << sy(baseline_mean) << "\" x2=\""
        << width - margin << "\" y2=\"" << sy(baseline_mean)
        << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    out << "<text x=\"" << width - margin << "\" y=\"" << sy(baseline_mean) - 5
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"gray\">baseline "
        << format_double(baseline_mean) << "</text>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : points) out << sx(p.episodes) << "," << sy(p.mean) << " ";
  out << "\"/>\n";
  for (const auto& p : points) {
    out << "<line x1=\"" << sx(p.episodes) << "\" y1=\"" << sy(p.mean - p.stddev)
        << "\" x2=\"" << sx(p.episodes) << "\" y2=\"" << sy(p.mean + p.stddev)
        << "\" stroke=\"steelblue\" stroke-opacity=\"0.4\"/>\n";
    out << "<circle cx=\"" << sx(p.episodes) << "\" cy=\"" << sy(p.mean)
        << "\" r=\"2.2\" fill=\"steelblue\"/>\n";
  }
  // axis extent labels
  out << "<text x=\"" << margin << "\" y=\"" << height - margin + 16
      << "\" font-size=\"11\">" << format_double(x_min) << "</text>\n";
  out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(x_max) << "</text>\n";
  out << "<text x=\"" << margin - 4 << "\" y=\"" << sy(y_min)
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(y_min) << "</text>\n";
  out << "<text x=\"" << margin - 4 << "\" y=\"" << sy(y_max) + 10
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(y_max) << "</text>\n";
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed on " + path);
}

}  // namespace neurwin
