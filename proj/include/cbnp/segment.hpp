#ifndef CBNP_SEGMENT_HPP
#define CBNP_SEGMENT_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cbnp/grid.hpp"
#include "cbnp/integrate.hpp"
#include "cbnp/model.hpp"

namespace cbnp {

// One feasible resource allocation for one epoch, with its allocation cost.
struct Decision {
  std::vector<double> values;
  double cost = 0.0;
};

struct SegmentSpec {
  std::string id;
  std::shared_ptr<const DynamicalModel> model;
  StateVector initial_state;
  std::vector<std::vector<Decision>> decision_sets;  // [epoch][choice]

  // Raw cost of the do-nothing plan; subtracted from every plan cost when the
  // instance optimizes savings, so the do-nothing plan costs exactly 0.
  double baseline_cost = 0.0;
  bool savings_form = false;

  int epochs() const { return static_cast<int>(decision_sets.size()); }
  int decision_dim() const {
    return decision_sets.empty() || decision_sets[0].empty()
               ? 0
               : static_cast<int>(decision_sets[0][0].values.size());
  }

  // Decision with the smallest allocation (minimal l1 norm, first on ties).
  int do_nothing_index(int epoch) const;

  // Index of the decision matching the given values within tol, or -1.
  int find_decision(int epoch, std::span<const double> values, double tol = 1e-9) const;
};

// Simulated plan cost: integral of g, terminal h, allocation costs, minus the
// segment baseline in savings form. Costs accumulate epoch by epoch in time
// order so that stage-wise and one-shot evaluations agree bit for bit.
double evaluate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                     std::span<const int> decision_idx);

// Same, resolving decision values against the feasible sets first. Throws
// InfeasibleDecisionError when a decision is not in F_is.
double evaluate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                     std::span<const std::vector<double>> decisions);

Trajectory simulate_plan(const SegmentSpec& segment, const EpochGrid& grid,
                         std::span<const int> decision_idx);

}  // namespace cbnp

#endif
