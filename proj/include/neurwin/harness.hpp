#ifndef NEURWIN_HARNESS_HPP
#define NEURWIN_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "neurwin/arm.hpp"
#include "neurwin/arms/deadline.hpp"
#include "neurwin/arms/recovering.hpp"
#include "neurwin/arms/wireless.hpp"
#include "neurwin/baselines.hpp"
#include "neurwin/mlp.hpp"
#include "neurwin/oracle.hpp"
#include "neurwin/trainer.hpp"

namespace neurwin {

enum class EnvKind { Deadline, Recovering, Wireless };

EnvKind env_kind_from_string(const std::string& name);
std::string to_string(EnvKind kind);

// One arm type: a parameter set shared by all arms of that type. Types
// are what NeurWIN trains one network per.
struct ArmType {
  EnvKind env = EnvKind::Deadline;
  DeadlineParams deadline;
  RecoveringParams recovering;
  WirelessParams wireless;
  std::string label;  // "deadline", "recovering_A", "wireless_q75", ...
};

std::vector<ArmType> env_arm_types(EnvKind kind);

// The paper's testing mix: deadline arms are identical; recovering arms
// split into four class quarters (earlier classes take the remainder);
// wireless arms split halves between q = 0.75 and q = 0.10.
// Returns one type id per arm.
std::vector<int> arm_mix(EnvKind kind, int n);

std::unique_ptr<ArmSimulator> make_arm(const ArmType& type, uint64_t seed);

// Environment defaults from the applications' training settings.
TrainingConfig default_training_config(EnvKind kind);

struct ExperimentConfig {
  EnvKind env = EnvKind::Deadline;
  int n = 4;
  int m = 1;
  int horizon = 300;
  double discount = 0.99;
  int runs = 50;
  uint64_t seed = 42;

  void validate() const;
};

// A control policy: per round it sees every arm's state and picks at
// most M non-terminal arms to activate.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_run(const std::vector<const ArmSimulator*>& /*arms*/) {}
  virtual std::vector<int> select(const std::vector<const ArmSimulator*>& arms, int m) = 0;
};

// Policies that score each arm in isolation; selection is top-M with
// lowest-id ties, skipping terminal arms.
class IndexPolicy : public Policy {
 public:
  explicit IndexPolicy(std::vector<int> type_of_arm) : type_of_arm_(std::move(type_of_arm)) {}
  virtual double index_of(int type_id, const ArmSimulator& arm) const = 0;
  std::vector<int> select(const std::vector<const ArmSimulator*>& arms, int m) override;

 protected:
  std::vector<int> type_of_arm_;
};

class NeurwinPolicy : public IndexPolicy {
 public:
  NeurwinPolicy(std::vector<int> type_of_arm, std::vector<IndexNetwork> nets);
  double index_of(int type_id, const ArmSimulator& arm) const override;

 private:
  std::vector<IndexNetwork> nets_;
};

// Oracle Whittle index lookup (deadline and recovering).
class WhittleOraclePolicy : public IndexPolicy {
 public:
  WhittleOraclePolicy(std::vector<int> type_of_arm, std::vector<ArmModel> models,
                      std::vector<IndexTable> tables);
  double index_of(int type_id, const ArmSimulator& arm) const override;

 private:
  std::vector<std::unordered_map<uint64_t, double>> index_by_state_;
};

class SizeAwarePolicy : public Policy {
 public:
  explicit SizeAwarePolicy(std::vector<WirelessParams> params_of_arm)
      : params_(std::move(params_of_arm)) {}
  std::vector<int> select(const std::vector<const ArmSimulator*>& arms, int m) override;

 private:
  std::vector<WirelessParams> params_;
};

// d-step lookahead with replanning every d rounds (recovering, M = 1).
class LookaheadPolicy : public Policy {
 public:
  LookaheadPolicy(std::vector<RecoveringParams> params_of_arm, int depth, int beam_width = 64);
  void begin_run(const std::vector<const ArmSimulator*>& arms) override;
  std::vector<int> select(const std::vector<const ArmSimulator*>& arms, int m) override;

 private:
  std::vector<RecoveringParams> params_;
  int depth_;
  int beam_width_;
  LookaheadPlan plan_;
  int position_ = 0;
};

class QwicPolicy : public IndexPolicy {
 public:
  QwicPolicy(std::vector<int> type_of_arm, std::vector<QwicResult> results);
  double index_of(int type_id, const ArmSimulator& arm) const override;

 private:
  std::vector<std::unordered_map<uint64_t, double>> index_by_state_;
};

struct RunRecord {
  int run = 0;
  uint64_t seed = 0;
  double total_discounted_reward = 0.0;
  std::vector<double> per_arm_discounted;
};

struct EvalResult {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<RunRecord> runs;
};

// Seeded top-M evaluation: per run, arms start from the documented
// initial states (deadline (0,0); recovering z=1; wireless per-run
// loads) and the policy activates up to M non-terminal arms per round.
// All randomness derives from config.seed, never from the policy.
EvalResult evaluate_policy(const ExperimentConfig& config, Policy& policy);

// Builds a policy from a spec string:
//   whittle-oracle | size-aware | lookahead:d=20 | greedy | qwic |
//   neurwin:ckpt=PATH[,PATH...]   (one checkpoint per arm type)
std::unique_ptr<Policy> make_policy(const std::string& spec, const ExperimentConfig& config,
                                    int64_t qwic_episodes = 2000);

struct CurvePoint {
  int64_t episodes = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Evaluates every checkpoint generation found in ckpt_dirs (one
// directory per arm type, matched by episode count) with the same run
// seeds; writes curve.csv and curve.svg under out_dir.
std::vector<CurvePoint> learning_curve(const ExperimentConfig& config,
                                       const std::vector<std::string>& ckpt_dirs,
                                       const std::string& out_dir,
                                       double baseline_mean = 0.0,
                                       bool have_baseline = false);

struct NoisePoint {
  double noise_level = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Trains one NeurWIN per arm type on a noise-wrapped simulator at each
// level, then evaluates the final parameters on the clean arms.
std::vector<NoisePoint> noisy_sweep(const ExperimentConfig& config,
                                    const TrainingConfig& train_cfg,
                                    const std::vector<double>& noise_levels,
                                    const std::string& out_dir);

// CSV writers (fixed formatting so byte-identical reruns hold).
void write_runs_csv(const std::string& path, const EvalResult& result);
void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points);
void write_noise_csv(const std::string& path, const std::vector<NoisePoint>& points);
void write_index_table_csv(const std::string& path, const ArmModel& model,
                           const IndexTable& table);
void write_ds_curves_csv(const std::string& path, const std::vector<DsCurve>& curves,
                         const std::string& coord_header);

// Minimal static line chart.
void write_curve_svg(const std::string& path, const std::vector<CurvePoint>& points,
                     double baseline_mean, bool have_baseline);

std::string format_double(double v);

}  // namespace neurwin

#endif  // NEURWIN_HARNESS_HPP
