#ifndef NEURWIN_ORACLE_HPP
#define NEURWIN_ORACLE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neurwin/arm.hpp"
#include "neurwin/arms/deadline.hpp"
#include "neurwin/arms/recovering.hpp"
#include "neurwin/rng.hpp"

namespace neurwin {

// Hash of a raw state's coordinate bit patterns; used for exact-match
// state lookup tables.
uint64_t state_key(const std::vector<double>& coords);

// Explicit finite-state model of one arm: deterministic reward per
// (state, action) and a stochastic transition kernel.
struct ArmModel {
  std::string name;
  std::vector<std::vector<double>> states;               // raw coords per state
  std::vector<std::array<double, 2>> rewards;            // [state][action]
  // [state][action] -> (next state index, probability) pairs
  std::vector<std::array<std::vector<std::pair<int, double>>, 2>> transitions;

  int state_count() const { return static_cast<int>(states.size()); }
  // Checks transition rows sum to 1 within 1e-12.
  void validate() const;
};

ArmModel deadline_model(const DeadlineParams& params = {});
ArmModel recovering_model(const RecoveringParams& params);

// The wireless state space (2 x 10^6 states) is simulation-only; this
// always throws and exists to make that contract explicit.
ArmModel wireless_model();

struct QValuesResult {
  double lambda = 0.0;
  std::vector<double> q_act;   // activate at round one, then optimal
  std::vector<double> q_pass;  // stay passive at round one, then optimal
  double truncation_bound = 0.0;  // beta^T * max |net reward| / (1 - beta)
  // decisions[k][s]: optimal action with k+1 steps remaining (ties activate)
  std::vector<std::vector<uint8_t>> decisions;

  double d_s(int state) const { return q_act[state] - q_pass[state]; }
};

// Finite-horizon dynamic program on the lambda-charged arm.
QValuesResult q_values(const ArmModel& model, double lambda, double beta, int horizon);

struct IndexTable {
  std::vector<std::vector<double>> states;
  std::vector<double> whittle;
  std::vector<int> iterations;
  std::vector<double> residual;  // D_s evaluated at the returned index
};

class IndexabilityViolation : public std::runtime_error {
 public:
  explicit IndexabilityViolation(const std::string& what) : std::runtime_error(what) {}
};

// Caches the per-lambda DP so per-state index searches share work.
class DsEvaluator {
 public:
  DsEvaluator(const ArmModel& model, double beta, int horizon);
  double d_s(int state, double lambda);
  const QValuesResult& q(double lambda);
  const ArmModel& model() const { return model_; }
  double beta() const { return beta_; }
  int horizon() const { return horizon_; }

 private:
  const ArmModel& model_;
  double beta_;
  int horizon_;
  std::vector<std::pair<double, QValuesResult>> cache_;
};

// Binary search for the root of D_s(lambda) on an auto-expanded
// bracket; by the one-arm optimality property the root is the Whittle
// index. Throws IndexabilityViolation when the observed sign pattern of
// D_s is not decreasing.
double whittle_index(DsEvaluator& eval, int state, double tol);
double whittle_index(const ArmModel& model, int state, double beta, double tol,
                     int horizon = 300);
IndexTable whittle_table(const ArmModel& model, double beta, double tol, int horizon = 300);

struct DsCurve {
  std::vector<double> state;      // raw coords
  std::vector<double> lambdas;    // strictly increasing grid
  std::vector<double> values;     // D_s at each grid point
};

struct IndexabilityReport {
  bool strongly_indexable = false;
  double margin = 0.0;
  std::vector<DsCurve> curves;                     // one per state
  std::vector<std::pair<int, double>> violations;  // (state index, lambda)
};

// Certifies D_s strictly decreasing on the grid for every state:
// consecutive values must drop by more than margin.
IndexabilityReport strong_indexability_check(const ArmModel& model,
                                             const std::vector<double>& lambda_grid,
                                             double beta, int horizon,
                                             double margin = 1e-9);

// Continuation policy for Monte-Carlo Q estimation. Receives the raw
// state and the number of rounds remaining (horizon - t).
using ContinuationPolicy =
    std::function<Action(const std::vector<double>& raw_state, int steps_remaining)>;

// The DP-optimal (nonstationary) continuation from a solved model.
ContinuationPolicy dp_continuation(const ArmModel& model, const QValuesResult& solved);
// Stationary threshold continuation: activate iff index(s) >= lambda.
ContinuationPolicy threshold_continuation(
    std::function<double(const std::vector<double>&)> index_fn, double lambda);

struct McQValues {
  double q_act = 0.0;
  double q_pass = 0.0;
  double q_act_stderr = 0.0;
  double q_pass_stderr = 0.0;
  int rollouts = 0;
};

// Estimates Q_act and Q_pass by forcing the first action and following
// the supplied continuation, with common random numbers between the two
// branches.
McQValues mc_q_values(ArmSimulator& arm, const std::vector<double>& state, double lambda,
                      double beta, int horizon, int rollouts, RngStream& rng,
                      const ContinuationPolicy& continuation);

}  // namespace neurwin

#endif  // NEURWIN_ORACLE_HPP
