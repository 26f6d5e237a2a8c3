#include "cbnp/segment.hpp"

#include <cmath>

namespace cbnp {

int SegmentSpec::do_nothing_index(int epoch) const {
  const auto& set = decision_sets[epoch];
  int best = 0;
  double best_norm = kInf;
  for (size_t k = 0; k < set.size(); ++k) {
    double norm = 0.0;
    for (double v : set[k].values) norm += std::abs(v);
    if (norm < best_norm) {
      best_norm = norm;
      best = static_cast<int>(k);
    }
  }
  return best;
}

int SegmentSpec::find_decision(int epoch, std::span<const double> values, double tol) const {
  const auto& set = decision_sets[epoch];
  for (size_t k = 0; k < set.size(); ++k) {
    if (set[k].values.size() != values.size()) continue;
    bool match = true;
    for (size_t c = 0; c < values.size(); ++c)
      if (std::abs(set[k].values[c] - values[c]) > tol) {
        match = false;
        break;
      }
    if (match) return static_cast<int>(k);
  }
  return -1;
}

double evaluate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                     std::span<const int> decision_idx) {
  if (static_cast<int>(decision_idx.size()) != grid.epochs())
    throw ValidationError("plan length does not match epoch count");
  EpochStepper stepper(*segment.model, grid);
  StateVector state = segment.initial_state;
  double cost = 0.0;
  for (int s = 0; s < grid.epochs(); ++s) {
    const Decision& d = segment.decision_sets[s][decision_idx[s]];
    EpochResult r = stepper.advance(s, state, d.values);
    cost += r.cost + d.cost;
    state = std::move(r.state);
  }
  cost += segment.model->terminal_cost(state);
  if (segment.savings_form) cost -= segment.baseline_cost;
  return cost;
}

double evaluate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                     std::span<const std::vector<double>> decisions) {
  std::vector<int> idx(decisions.size());
  for (size_t s = 0; s < decisions.size(); ++s) {
    idx[s] = segment.find_decision(static_cast<int>(s), decisions[s], 1e-9);
    if (idx[s] < 0)
      throw InfeasibleDecisionError("segment " + segment.id + ": decision at epoch " +
                                    std::to_string(s) + " is not in the feasible set");
  }
  return evaluate_plan(segment, grid, idx);
}

Trajectory simulate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                         std::span<const int> decision_idx) {
  std::vector<std::vector<double>> values;
  values.reserve(decision_idx.size());
  for (int s = 0; s < grid.epochs(); ++s)
    values.push_back(segment.decision_sets[s][decision_idx[s]].values);
  return integrate(*segment.model, grid, segment.initial_state, values);
}

}  // namespace cbnp
