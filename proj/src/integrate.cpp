#include "cbnp/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace cbnp {

EpochStepper::EpochStepper(const DynamicalModel& model, const EpochGrid& grid)
    : model_(model), grid_(grid) {
  const size_t r = static_cast<size_t>(model.state_dim());
  y_.resize(r);
  k1_.resize(r);
  k2_.resize(r);
  k3_.resize(r);
  k4_.resize(r);
  tmp_.resize(r);
  control_.resize(static_cast<size_t>(model.control_dim()));
}

void EpochStepper::rk4_step(double t, double h, std::span<const double> control) {
  const size_t r = y_.size();
  model_.derivative(t, y_, control, k1_);
  for (size_t i = 0; i < r; ++i) tmp_[i] = y_[i] + 0.5 * h * k1_[i];
  model_.derivative(t + 0.5 * h, tmp_, control, k2_);
  for (size_t i = 0; i < r; ++i) tmp_[i] = y_[i] + 0.5 * h * k2_[i];
  model_.derivative(t + 0.5 * h, tmp_, control, k3_);
  for (size_t i = 0; i < r; ++i) tmp_[i] = y_[i] + h * k3_[i];
  model_.derivative(t + h, tmp_, control, k4_);
  for (size_t i = 0; i < r; ++i)
    y_[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
}

void EpochStepper::check_state(int epoch, int substep) const {
  for (double v : y_) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit)
      throw DivergenceError("integration diverged at epoch " + std::to_string(epoch) +
                                ", substep " + std::to_string(substep),
                            epoch, substep);
  }
}

EpochResult EpochStepper::advance(int epoch, std::span<const double> state,
                                  std::span<const double> decision) {
  std::copy(state.begin(), state.end(), y_.begin());
  const double dt = grid_.duration(epoch);
  const int n = grid_.substeps_per_epoch;
  const double h = dt / n;
  const double scale = model_.rate_normalized() ? 1.0 / dt : 1.0;
  for (size_t i = 0; i < control_.size(); ++i) control_[i] = decision[i] * scale;

  double t = grid_.timestamps[epoch];
  double cost = 0.0;
  double g_prev = model_.running_cost(t, y_);
  for (int k = 0; k < n; ++k) {
    rk4_step(t, h, control_);
    t = grid_.timestamps[epoch] + (k + 1) * h;
    check_state(epoch, k);
    const double g = model_.running_cost(t, y_);
    cost += 0.5 * h * (g_prev + g);
    g_prev = g;
  }
  EpochResult out;
  out.state.assign(y_.begin(), y_.end());
  out.cost = cost;
  return out;
}

void EpochStepper::advance_sampled(int epoch, Trajectory& traj,
                                   std::span<const double> decision) {
  std::copy(traj.states.back().begin(), traj.states.back().end(), y_.begin());
  const double dt = grid_.duration(epoch);
  const int n = grid_.substeps_per_epoch;
  const double h = dt / n;
  const double scale = model_.rate_normalized() ? 1.0 / dt : 1.0;
  for (size_t i = 0; i < control_.size(); ++i) control_[i] = decision[i] * scale;

  double t = grid_.timestamps[epoch];
  double cost = 0.0;
  double g_prev = model_.running_cost(t, y_);
  for (int k = 0; k < n; ++k) {
    rk4_step(t, h, control_);
    t = grid_.timestamps[epoch] + (k + 1) * h;
    check_state(epoch, k);
    const double g = model_.running_cost(t, y_);
    cost += 0.5 * h * (g_prev + g);
    g_prev = g;
    traj.times.push_back(t);
    traj.states.emplace_back(y_.begin(), y_.end());
  }
  traj.running_cost += cost;
}

Trajectory integrate(const DynamicalModel& model, const EpochGrid& grid,
                     const StateVector& m0,
                     std::span<const std::vector<double>> decisions) {
  if (static_cast<int>(m0.size()) != model.state_dim())
    throw ValidationError("initial state dimension does not match model");
  if (static_cast<int>(decisions.size()) != grid.epochs())
    throw ValidationError("need one decision per epoch");

  Trajectory traj;
  traj.times.push_back(grid.timestamps.front());
  traj.states.push_back(m0);
  EpochStepper stepper(model, grid);
  for (int s = 0; s < grid.epochs(); ++s) stepper.advance_sampled(s, traj, decisions[s]);
  return traj;
}

}  // namespace cbnp
