#include "neurwin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace neurwin {

std::vector<int> top_m_by_index(const std::vector<double>& indices, int m) {
  const int n = static_cast<int>(indices.size());
  if (m > n) throw std::invalid_argument("top_m_by_index: m exceeds the number of arms");
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (indices[a] != indices[b]) return indices[a] > indices[b];
    return a < b;
  });
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

std::unordered_map<uint64_t, int> state_lookup(const ArmModel& model) {
  std::unordered_map<uint64_t, int> lookup;
  lookup.reserve(model.states.size());
  for (int s = 0; s < model.state_count(); ++s) lookup.emplace(state_key(model.states[s]), s);
  return lookup;
}

}  // namespace

std::vector<int> deadline_whittle_policy(const std::vector<std::vector<double>>& states,
                                         const ArmModel& model, const IndexTable& table,
                                         int m) {
  if (m > static_cast<int>(states.size()))
    throw std::invalid_argument("deadline_whittle_policy: m exceeds the number of arms");
  const auto lookup = state_lookup(model);
  std::vector<double> indices;
  indices.reserve(states.size());
  for (const auto& s : states) {
    const auto it = lookup.find(state_key(s));
    if (it == lookup.end())
      throw std::invalid_argument("deadline_whittle_policy: state not in index table");
    indices.push_back(table.whittle[it->second]);
  }
  return top_m_by_index(indices, m);
}

std::vector<int> size_aware_policy(const std::vector<WirelessArmView>& arms, int m) {
  std::vector<int> good, bad;
  for (int i = 0; i < static_cast<int>(arms.size()); ++i) {
    if (arms[i].load <= 0.0) continue;
    (arms[i].channel == 1 ? good : bad).push_back(i);
  }
  auto secondary = [&](int i) { return arms[i].holding_cost * arms[i].rate_good / arms[i].load; };
  auto primary = [&](int i) {
    return arms[i].holding_cost /
           (arms[i].good_prob * (arms[i].rate_good / arms[i].rate_bad - 1.0));
  };
  std::sort(good.begin(), good.end(), [&](int a, int b) {
    const double ia = secondary(a), ib = secondary(b);
    if (ia != ib) return ia > ib;
    return a < b;
  });
  std::sort(bad.begin(), bad.end(), [&](int a, int b) {
    const double ia = primary(a), ib = primary(b);
    if (ia != ib) return ia > ib;
    return a < b;
  });

  std::vector<int> selected;
  for (int i : good) {
    if (static_cast<int>(selected.size()) >= m) break;
    selected.push_back(i);
  }
  for (int i : bad) {
    if (static_cast<int>(selected.size()) >= m) break;
    selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

LookaheadPlan lookahead_policy(const std::vector<int>& waiting_times,
                               const std::vector<RecoveringParams>& arm_params, int d,
                               int beam_width, LookaheadMode mode) {
  const int n = static_cast<int>(waiting_times.size());
  if (n == 0) throw std::invalid_argument("lookahead_policy: no arms");
  if (waiting_times.size() != arm_params.size())
    throw std::invalid_argument("lookahead_policy: per-arm parameters required");
  if (d < 1 || beam_width < 1)
    throw std::invalid_argument("lookahead_policy: d and beam_width must be >= 1");

  const bool exhaustive =
      mode == LookaheadMode::Exhaustive ||
      (mode == LookaheadMode::Auto && std::pow(static_cast<double>(n), d) <= 1e6);

  if (exhaustive) {
    // Depth-first enumeration of all N^d action sequences; trying arms
    // in id order and replacing only on strict improvement keeps the
    // lexicographically smallest maximizer.
    LookaheadPlan best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<int> choices(d, 0);
    std::vector<int> z = waiting_times;
    auto dfs = [&](auto&& self, int round, double value) -> void {
      if (round == d) {
        if (value > best.value) {
          best.value = value;
          best.choices = choices;
        }
        return;
      }
      const std::vector<int> saved = z;
      for (int arm = 0; arm < n; ++arm) {
        choices[round] = arm;
        const double gain = RecoveringArm::recovery(arm_params[arm], saved[arm]);
        for (int i = 0; i < n; ++i)
          z[i] = i == arm ? 1 : std::min(saved[i] + 1, arm_params[i].z_max);
        self(self, round + 1, value + gain);
        z = saved;
      }
    };
    dfs(dfs, 0, 0.0);
    return best;
  }

  struct Node {
    std::vector<int> choices;
    std::vector<int> z;
    double value = 0.0;
  };
  std::vector<Node> beam{Node{{}, waiting_times, 0.0}};
  for (int round = 0; round < d; ++round) {
    std::vector<Node> candidates;
    candidates.reserve(beam.size() * n);
    for (const Node& node : beam)
      for (int arm = 0; arm < n; ++arm) {
        Node next = node;
        next.choices.push_back(arm);
        next.value += RecoveringArm::recovery(arm_params[arm], node.z[arm]);
        for (int i = 0; i < n; ++i)
          next.z[i] = i == arm ? 1 : std::min(node.z[i] + 1, arm_params[i].z_max);
        candidates.push_back(std::move(next));
      }
    std::sort(candidates.begin(), candidates.end(), [](const Node& a, const Node& b) {
      if (a.value != b.value) return a.value > b.value;
      return a.choices < b.choices;
    });
    if (static_cast<int>(candidates.size()) > beam_width) candidates.resize(beam_width);
    beam = std::move(candidates);
  }

  LookaheadPlan plan;
  plan.choices = beam.front().choices;
  plan.value = beam.front().value;
  return plan;
}

QwicResult qwic_train(ArmSimulator& arm, const ArmModel& model,
                      const std::vector<double>& candidates, const QwicConfig& config) {
  if (candidates.empty()) throw std::invalid_argument("qwic_train: empty candidate set");
  if (model.state_count() >= 1000)
    throw std::invalid_argument("qwic_train: state space too large for tabular learning");
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());

  const auto lookup = state_lookup(model);
  const int n = model.state_count();

  QwicResult result;
  result.states = model.states;
  result.candidates = sorted;
  result.q.assign(sorted.size(), std::vector<std::array<double, 2>>(n, {0.0, 0.0}));

  for (size_t c = 0; c < sorted.size(); ++c) {
    const double lambda = sorted[c];
    auto& q = result.q[c];
    RngStream explore(mix_seed(config.seed, {static_cast<uint64_t>(c), 1}));
    arm.reseed(mix_seed(config.seed, {static_cast<uint64_t>(c), 2}));
    int64_t t = 0;
    for (int64_t ep = 0; ep < config.episodes; ++ep) {
      arm.set_raw_state(arm.sample_initial_raw(explore));
      for (int step = 0; step < config.horizon; ++step) {
        if (arm.terminal()) break;
        const int s = lookup.at(state_key(arm.raw_state()));
        ++t;
        const double eps = std::min(1.0, 2.0 / std::sqrt(static_cast<double>(t)));
        int a;
        if (explore.bernoulli(eps))
          a = explore.next_int(2);
        else
          a = q[s][1] >= q[s][0] ? 1 : 0;
        const double r = arm.step(static_cast<Action>(a)) - lambda * a;
        const int s2 = lookup.at(state_key(arm.raw_state()));
        const double target = r + config.discount * std::max(q[s2][0], q[s2][1]);
        q[s][a] += config.learning_rate * (target - q[s][a]);
      }
    }
  }

  result.index.resize(n);
  for (int s = 0; s < n; ++s) {
    double best_gap = std::numeric_limits<double>::infinity();
    double best_lambda = sorted.front();
    for (size_t c = 0; c < sorted.size(); ++c) {
      const double gap = std::abs(result.q[c][s][1] - result.q[c][s][0]);
      if (gap < best_gap) {  // ties keep the smaller lambda
        best_gap = gap;
        best_lambda = sorted[c];
      }
    }
    result.index[s] = best_lambda;
  }
  return result;
}

std::vector<double> qwic_default_candidates(const IndexTable& table, int count) {
  double lo = *std::min_element(table.whittle.begin(), table.whittle.end());
  double hi = *std::max_element(table.whittle.begin(), table.whittle.end());
  if (hi - lo < 1e-9) return {lo};
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
  return out;
}

}  // namespace neurwin
