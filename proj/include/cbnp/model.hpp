#ifndef CBNP_MODEL_HPP
#define CBNP_MODEL_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbnp/common.hpp"

namespace cbnp {

// A segment's dynamical system: transition f(M, x), running cost g_t(M) and
// terminal cost h(M(T)), all in minimization form. Implementations are
// immutable after construction; derivative/cost calls are pure and thread-safe.
class DynamicalModel {
 public:
  virtual ~DynamicalModel() = default;

  virtual std::string_view name() const = 0;
  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;

  // When true, a decision x held over epoch s enters the transition as the
  // rate x / (tau_{s+1} - tau_s).
  virtual bool rate_normalized() const = 0;

  virtual void derivative(double t, std::span<const double> state,
                          std::span<const double> control,
                          std::span<double> out) const = 0;

  virtual double running_cost(double /*t*/, std::span<const double> /*state*/) const {
    return 0.0;
  }
  virtual double terminal_cost(std::span<const double> /*state*/) const { return 0.0; }

  virtual std::vector<std::string> compartment_names() const;

  // Dynamics parameters, exposed for sensitivity analysis. Cost weights are
  // not part of the vector: perturbing them would redefine the objective
  // rather than the system.
  virtual std::vector<double> dynamics_parameters() const = 0;
  virtual std::unique_ptr<DynamicalModel> with_dynamics_parameters(
      std::span<const double> params) const = 0;

  virtual std::unique_ptr<DynamicalModel> clone() const = 0;
};

inline std::vector<std::string> DynamicalModel::compartment_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < state_dim(); ++i) names.push_back("m" + std::to_string(i));
  return names;
}

}  // namespace cbnp

#endif
