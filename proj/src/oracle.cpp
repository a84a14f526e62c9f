#include "neurwin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <unordered_map>

namespace neurwin {

uint64_t state_key(const std::vector<double>& coords) {
  uint64_t key = 0x73746174652d6b65ULL;
  for (double c : coords) {
    uint64_t bits;
    std::memcpy(&bits, &c, sizeof(bits));
    key = RngStream::mix64(key ^ bits);
  }
  return key;
}

void ArmModel::validate() const {
  for (int s = 0; s < state_count(); ++s) {
    for (int a = 0; a < 2; ++a) {
      double total = 0.0;
      for (const auto& [next, p] : transitions[s][a]) {
        if (next < 0 || next >= state_count())
          throw std::invalid_argument(name + ": transition target out of range");
        if (p < 0.0) throw std::invalid_argument(name + ": negative transition probability");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument(name + ": transition row does not sum to 1");
    }
  }
}

ArmModel deadline_model(const DeadlineParams& params) {
  ArmModel model;
  model.name = "deadline";
  const int n = DeadlineArm::state_count(params);
  model.states.reserve(n);
  for (int i = 0; i < n; ++i) model.states.push_back(DeadlineArm::state_from_index(params, i));

  // Arrival law shared by every state with D <= 1.
  std::vector<std::pair<int, double>> arrival;
  arrival.reserve(n);
  arrival.emplace_back(0, params.empty_arrival_prob);
  const double occupied_p = (1.0 - params.empty_arrival_prob) / (n - 1);
  for (int i = 1; i < n; ++i) arrival.emplace_back(i, occupied_p);

  model.rewards.resize(n);
  model.transitions.resize(n);
  for (int i = 0; i < n; ++i) {
    const int d = static_cast<int>(model.states[i][0]);
    const int b = static_cast<int>(model.states[i][1]);
    for (int a = 0; a < 2; ++a) {
      model.rewards[i][a] =
          DeadlineArm::reward(params, d, b, static_cast<Action>(a));
      if (d > 1) {
        const int nb = b > 0 ? b - a : 0;
        model.transitions[i][a] = {{DeadlineArm::index_from_state(params, d - 1, nb), 1.0}};
      } else {
        model.transitions[i][a] = arrival;
      }
    }
  }
  model.validate();
  return model;
}

ArmModel recovering_model(const RecoveringParams& params) {
  ArmModel model;
  model.name = "recovering";
  const int n = params.z_max;
  model.rewards.resize(n);
  model.transitions.resize(n);
  for (int i = 0; i < n; ++i) {
    const int z = i + 1;
    model.states.push_back({static_cast<double>(z)});
    model.rewards[i][0] = 0.0;
    model.rewards[i][1] = RecoveringArm::recovery(params, z);
    model.transitions[i][0] = {{std::min(z + 1, params.z_max) - 1, 1.0}};
    model.transitions[i][1] = {{0, 1.0}};
  }
  model.validate();
  return model;
}

ArmModel wireless_model() {
  throw std::runtime_error(
      "wireless: state space (2 x 10^6 states) has no desk-scale exact model; "
      "use mc_q_values");
}

QValuesResult q_values(const ArmModel& model, double lambda, double beta, int horizon) {
  if (horizon < 1) throw std::invalid_argument("q_values: horizon must be >= 1");
  const int n = model.state_count();
  QValuesResult result;
  result.lambda = lambda;
  result.decisions.assign(horizon - 1, std::vector<uint8_t>(n, 0));

  double max_net = 0.0;
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a)
      max_net = std::max(max_net, std::abs(model.rewards[s][a] - lambda * a));
  result.truncation_bound = std::pow(beta, horizon) * max_net / (1.0 - beta);

  // value[s]: optimal value with k steps remaining; k runs 1..horizon-1.
  std::vector<double> value(n, 0.0), next_value(n, 0.0);
  for (int k = 1; k <= horizon - 1; ++k) {
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      uint8_t best_a = 0;
      for (int a = 0; a < 2; ++a) {
        double v = model.rewards[s][a] - lambda * a;
        double cont = 0.0;
        for (const auto& [next, p] : model.transitions[s][a]) cont += p * value[next];
        v += beta * cont;
        if (v > best || (a == 1 && v == best)) {  // ties activate
          best = v;
          best_a = static_cast<uint8_t>(a);
        }
      }
      next_value[s] = best;
      result.decisions[k - 1][s] = best_a;
    }
    value.swap(next_value);
  }

  result.q_act.resize(n);
  result.q_pass.resize(n);
  for (int s = 0; s < n; ++s) {
    double cont_act = 0.0, cont_pass = 0.0;
    for (const auto& [next, p] : model.transitions[s][1]) cont_act += p * value[next];
    for (const auto& [next, p] : model.transitions[s][0]) cont_pass += p * value[next];
    result.q_act[s] = model.rewards[s][1] - lambda + beta * cont_act;
    result.q_pass[s] = model.rewards[s][0] + beta * cont_pass;
  }
  return result;
}

DsEvaluator::DsEvaluator(const ArmModel& model, double beta, int horizon)
    : model_(model), beta_(beta), horizon_(horizon) {}

const QValuesResult& DsEvaluator::q(double lambda) {
  for (const auto& entry : cache_)
    if (entry.first == lambda) return entry.second;
  cache_.emplace_back(lambda, q_values(model_, lambda, beta_, horizon_));
  return cache_.back().second;
}

double DsEvaluator::d_s(int state, double lambda) { return q(lambda).d_s(state); }

namespace {

std::string state_label(const ArmModel& model, int state) {
  std::string label = model.name + " state (";
  const auto& coords = model.states[state];
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i) label += ",";
    label += std::to_string(coords[i]);
  }
  return label + ")";
}

}  // namespace

double whittle_index(DsEvaluator& eval, int state, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("whittle_index: tol must be positive");
  const ArmModel& model = eval.model();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < model.state_count(); ++s)
    for (int a = 0; a < 2; ++a) {
      lo = std::min(lo, model.rewards[s][a]);
      hi = std::max(hi, model.rewards[s][a]);
    }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }

  // Observed (lambda, D_s) pairs; checked against the decreasing sign
  // pattern at the end.
  std::vector<std::pair<double, double>> seen;
  auto probe = [&](double lambda) {
    const double d = eval.d_s(state, lambda);
    seen.emplace_back(lambda, d);
    return d;
  };

  double d_lo = probe(lo);
  double d_hi = probe(hi);
  for (int i = 0; d_lo < 0.0 && i < 70; ++i) {
    const double width = hi - lo;
    lo -= width;
    d_lo = probe(lo);
  }
  for (int i = 0; d_hi > 0.0 && i < 70; ++i) {
    const double width = hi - lo;
    hi += width;
    d_hi = probe(hi);
  }
  if (d_lo < 0.0 || d_hi > 0.0)
    throw IndexabilityViolation("whittle_index: could not bracket a decreasing D_s for " +
                                state_label(model, state));

  int iterations = 0;
  while (hi - lo > tol && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    const double d_mid = probe(mid);
    if (d_mid >= 0.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }

  std::sort(seen.begin(), seen.end());
  for (size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].first == seen[i - 1].first) continue;
    if (seen[i].second > seen[i - 1].second + 1e-9)
      throw IndexabilityViolation("whittle_index: D_s not decreasing near lambda=" +
                                  std::to_string(seen[i].first) + " for " +
                                  state_label(model, state));
  }
  return 0.5 * (lo + hi);
}

double whittle_index(const ArmModel& model, int state, double beta, double tol, int horizon) {
  DsEvaluator eval(model, beta, horizon);
  return whittle_index(eval, state, tol);
}

IndexTable whittle_table(const ArmModel& model, double beta, double tol, int horizon) {
  DsEvaluator eval(model, beta, horizon);
  IndexTable table;
  table.states = model.states;
  const int n = model.state_count();
  table.whittle.resize(n);
  table.iterations.assign(n, 0);
  table.residual.resize(n);
  for (int s = 0; s < n; ++s) {
    table.whittle[s] = whittle_index(eval, s, tol);
    table.residual[s] = eval.d_s(s, table.whittle[s]);
  }
  return table;
}

IndexabilityReport strong_indexability_check(const ArmModel& model,
                                             const std::vector<double>& lambda_grid,
                                             double beta, int horizon, double margin) {
  for (size_t i = 1; i < lambda_grid.size(); ++i)
    if (lambda_grid[i] <= lambda_grid[i - 1])
      throw std::invalid_argument("strong_indexability_check: grid must be strictly increasing");

  const int n = model.state_count();
  IndexabilityReport report;
  report.margin = margin;
  report.curves.resize(n);
  for (int s = 0; s < n; ++s) {
    report.curves[s].state = model.states[s];
    report.curves[s].lambdas = lambda_grid;
    report.curves[s].values.resize(lambda_grid.size());
  }
  for (size_t k = 0; k < lambda_grid.size(); ++k) {
    const QValuesResult q = q_values(model, lambda_grid[k], beta, horizon);
    for (int s = 0; s < n; ++s) report.curves[s].values[k] = q.d_s(s);
  }
  for (int s = 0; s < n; ++s) {
    const auto& vals = report.curves[s].values;
    for (size_t k = 1; k < vals.size(); ++k)
      if (!(vals[k] < vals[k - 1] - margin))
        report.violations.emplace_back(s, lambda_grid[k]);
  }
  report.strongly_indexable = report.violations.empty();
  return report;
}

ContinuationPolicy dp_continuation(const ArmModel& model, const QValuesResult& solved) {
  auto lookup = std::make_shared<std::unordered_map<uint64_t, int>>();
  for (int s = 0; s < model.state_count(); ++s)
    lookup->emplace(state_key(model.states[s]), s);
  const auto* decisions = &solved.decisions;
  return [lookup, decisions](const std::vector<double>& raw, int steps_remaining) {
    const auto it = lookup->find(state_key(raw));
    if (it == lookup->end())
      throw std::invalid_argument("dp_continuation: state not in model");
    const int k = std::min<int>(steps_remaining, static_cast<int>(decisions->size()));
    if (k < 1) return Action::Passive;
    return static_cast<Action>((*decisions)[k - 1][it->second]);
  };
}

ContinuationPolicy threshold_continuation(
    std::function<double(const std::vector<double>&)> index_fn, double lambda) {
  return [index_fn = std::move(index_fn), lambda](const std::vector<double>& raw,
                                                  int /*steps_remaining*/) {
    return index_fn(raw) >= lambda ? Action::Active : Action::Passive;
  };
}

McQValues mc_q_values(ArmSimulator& arm, const std::vector<double>& state, double lambda,
                      double beta, int horizon, int rollouts, RngStream& rng,
                      const ContinuationPolicy& continuation) {
  if (rollouts < 2) throw std::invalid_argument("mc_q_values: rollouts must be >= 2");

  auto run_branch = [&](Action first, uint64_t exo_seed) {
    arm.reseed(exo_seed);
    arm.set_raw_state(state);
    double total = arm.step(first) - lambda * as_int(first);
    double disc = beta;
    for (int t = 1; t < horizon; ++t) {
      if (arm.terminal()) break;
      const Action a = continuation(arm.raw_state(), horizon - t);
      total += disc * (arm.step(a) - lambda * as_int(a));
      disc *= beta;
    }
    return total;
  };

  McQValues out;
  out.rollouts = rollouts;
  double sum_a = 0.0, sum_a2 = 0.0, sum_p = 0.0, sum_p2 = 0.0;
  for (int k = 0; k < rollouts; ++k) {
    const uint64_t exo = rng.next_u64();  // shared by both branches
    const double ga = run_branch(Action::Active, exo);
    const double gp = run_branch(Action::Passive, exo);
    sum_a += ga;
    sum_a2 += ga * ga;
    sum_p += gp;
    sum_p2 += gp * gp;
  }
  const double n = rollouts;
  out.q_act = sum_a / n;
  out.q_pass = sum_p / n;
  const double var_a = std::max(0.0, (sum_a2 - n * out.q_act * out.q_act) / (n - 1.0));
  const double var_p = std::max(0.0, (sum_p2 - n * out.q_pass * out.q_pass) / (n - 1.0));
  out.q_act_stderr = std::sqrt(var_a / n);
  out.q_pass_stderr = std::sqrt(var_p / n);
  return out;
}

}  // namespace neurwin
