#ifndef NEURWIN_BASELINES_HPP
#define NEURWIN_BASELINES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "neurwin/arm.hpp"
#include "neurwin/arms/recovering.hpp"
#include "neurwin/arms/wireless.hpp"
#include "neurwin/oracle.hpp"
#include "neurwin/rng.hpp"

namespace neurwin {

// Ids of the M arms with the highest index values, ties broken by
// lowest arm id. Shared by every index policy.
std::vector<int> top_m_by_index(const std::vector<double>& indices, int m);

// Exact-Whittle deadline policy: selects the M spots whose (D, B)
// states carry the largest oracle indices.
std::vector<int> deadline_whittle_policy(const std::vector<std::vector<double>>& states,
                                         const ArmModel& model, const IndexTable& table,
                                         int m);

struct WirelessArmView {
  double load = 0.0;       // y
  int channel = 0;         // v
  double holding_cost = 1.0;
  double rate_bad = 8400.0;
  double rate_good = 33600.0;
  double good_prob = 0.75;
};

// Size-aware index policy: good-channel unfinished arms ranked by the
// secondary index c*r2/y, remaining slots filled by the primary index
// c/(q(r2/r1 - 1)). Finished arms are never selected; if fewer than m
// arms remain unfinished, all of them are selected.
std::vector<int> size_aware_policy(const std::vector<WirelessArmView>& arms, int m);

struct LookaheadPlan {
  std::vector<int> choices;  // arm id per round, length d
  double value = 0.0;        // cumulative undiscounted reward
};

enum class LookaheadMode { Auto, Exhaustive, Beam };

// d-step lookahead for recovering bandits (M = 1): exhaustive when
// N^d <= 10^6, beam search of the given width otherwise. The plan is
// meant to be executed for d rounds before replanning.
LookaheadPlan lookahead_policy(const std::vector<int>& waiting_times,
                               const std::vector<RecoveringParams>& arm_params, int d,
                               int beam_width = 64,
                               LookaheadMode mode = LookaheadMode::Auto);

struct QwicConfig {
  int64_t episodes = 1000;
  int horizon = 300;
  double learning_rate = 0.001;
  double discount = 0.99;
  uint64_t seed = 0;
};

struct QwicResult {
  std::vector<std::vector<double>> states;  // raw coords, model order
  std::vector<double> index;                // lambda~ per state
  std::vector<std::vector<std::array<double, 2>>> q;  // [candidate][state][action]
  std::vector<double> candidates;
};

// Tabular QWIC heuristic: independent Q-learning on the lambda-charged
// arm for every candidate lambda; the per-state index is the candidate
// minimizing |Q(lambda,s,1) - Q(lambda,s,0)|, ties to the smaller
// lambda. Epsilon-greedy exploration with eps = min(1, 2 t^-1/2).
QwicResult qwic_train(ArmSimulator& arm, const ArmModel& model,
                      const std::vector<double>& candidates, const QwicConfig& config);

// Evenly spaced candidate set spanning the oracle index range.
std::vector<double> qwic_default_candidates(const IndexTable& table, int count = 21);

}  // namespace neurwin

#endif  // NEURWIN_BASELINES_HPP
