#ifndef CBNP_INTEGRATE_HPP
#define CBNP_INTEGRATE_HPP

#include <span>
#include <vector>

#include "cbnp/grid.hpp"
#include "cbnp/model.hpp"

namespace cbnp {

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;  // states.front() equals the initial condition exactly
  double running_cost = 0.0;

  const StateVector& terminal_state() const { return states.back(); }
};

struct EpochResult {
  StateVector state;
  double cost = 0.0;  // integral of g over the epoch (trapezoid on the substep grid)
};

// Fixed-step RK4 over one epoch with the control held constant. Reusable
// workspace: the pricing loops call this millions of times.
class EpochStepper {
 public:
  EpochStepper(const DynamicalModel& model, const EpochGrid& grid);

  // decision: raw decision values (normalized to a rate internally when the
  // model asks for it). Throws DivergenceError on non-finite or blown-up states.
  EpochResult advance(int epoch, std::span<const double> state,
                      std::span<const double> decision);

  // Same advance, appending every substep sample to the trajectory.
  void advance_sampled(int epoch, Trajectory& traj, std::span<const double> decision);

 private:
  void rk4_step(double t, double h, std::span<const double> control);
  void check_state(int epoch, int substep) const;

  const DynamicalModel& model_;
  const EpochGrid& grid_;
  std::vector<double> y_, k1_, k2_, k3_, k4_, tmp_, control_;
  double cost_ = 0.0;
};

Trajectory integrate(const DynamicalModel& model, const EpochGrid& grid,
                     const StateVector& m0,
                     std::span<const std::vector<double>> decisions);

}  // namespace cbnp

#endif
