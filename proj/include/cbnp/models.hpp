#ifndef CBNP_MODELS_HPP
#define CBNP_MODELS_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cbnp/model.hpp"

namespace cbnp {

// Piecewise-constant-in-time coefficient, defaulting to a constant.
// Breakpoints are left edges; value i applies on [breakpoints[i], breakpoints[i+1]).
struct TimeTable {
  std::vector<double> breakpoints{0.0};
  std::vector<double> values{0.0};

  TimeTable() = default;
  TimeTable(double constant) : breakpoints{0.0}, values{constant} {}
  TimeTable(std::vector<double> bp, std::vector<double> vals)
      : breakpoints(std::move(bp)), values(std::move(vals)) {}

  double at(double t) const {
    size_t i = breakpoints.size() - 1;
    while (i > 0 && t < breakpoints[i]) --i;
    return values[i];
  }
  bool is_constant() const { return values.size() == 1; }
};

// Eleven-compartment COVID model with vaccinations. Compartments:
//   S, E, I, U, H, Q, D, M, S', E', I'
// The printed dynamics route the vaccination transfer S -> M directly, so the
// primed compartments are carried with zero derivative.
struct DelphiVParams {
  double alpha = 0.0;           // infection rate
  TimeTable gamma{1.0};         // government-response multiplier
  double beta = 0.0;            // vaccine effectiveness in [0,1]
  double r_incubation = 0.0;    // E -> I
  double r_detection = 0.0;     // I outflow; equals r_u + r_h + r_q for a closed system
  TimeTable r_undetected{0.0};  // I -> U
  TimeTable r_hospital{0.0};    // I -> H
  TimeTable r_quarantine{0.0};  // I -> Q
  double r_death = 0.0;         // U/H/Q -> D
  double c_death = 1.0;
  double c_exposed = 0.0;
  double c_hospital = 0.0;
  double c_quarantine = 0.0;
  double pallet_size = 1.0;  // vaccine shipment granularity, in state units
  // Transfer out of S is capped at S / depletion_timescale so that oversupply
  // cannot push S negative; set to the longest epoch duration at load.
  double depletion_timescale = 1.0;

  void validate() const;
};

class DelphiVModel final : public DynamicalModel {
 public:
  enum Comp { S = 0, E, I, U, H, Q, D, M, S2, E2, I2, kDim };

  explicit DelphiVModel(DelphiVParams params);

  std::string_view name() const override { return "delphi_v"; }
  int state_dim() const override { return kDim; }
  int control_dim() const override { return 1; }
  bool rate_normalized() const override { return true; }
  void derivative(double t, std::span<const double> state, std::span<const double> control,
                  std::span<double> out) const override;
  double terminal_cost(std::span<const double> state) const override;
  std::vector<std::string> compartment_names() const override;
  std::vector<double> dynamics_parameters() const override;
  std::unique_ptr<DynamicalModel> with_dynamics_parameters(
      std::span<const double> params) const override;
  std::unique_ptr<DynamicalModel> clone() const override;

  const DelphiVParams& params() const { return params_; }

 private:
  DelphiVParams params_;
};

// Two-compartment product adoption model: susceptible users A, adopters B.
// The promotion control is the population share x2, rate-normalized.
struct BassParams {
  double alpha = 0.0;      // promotion conversion rate
  double beta = 0.0;       // imitation rate
  double market_size = 1.0;
  double increment = 1.0;  // population-share step of the promotion grid
  int sparsity = 1;        // max products promoted per epoch

  void validate() const;
};

class BassModel final : public DynamicalModel {
 public:
  enum Comp { A = 0, B, kDim };

  explicit BassModel(BassParams params);

  std::string_view name() const override { return "bass"; }
  int state_dim() const override { return kDim; }
  int control_dim() const override { return 2; }  // (x1 promote flag, x2 share)
  bool rate_normalized() const override { return true; }
  void derivative(double t, std::span<const double> state, std::span<const double> control,
                  std::span<double> out) const override;
  double terminal_cost(std::span<const double> state) const override;
  std::vector<std::string> compartment_names() const override;
  std::vector<double> dynamics_parameters() const override;
  std::unique_ptr<DynamicalModel> with_dynamics_parameters(
      std::span<const double> params) const override;
  std::unique_ptr<DynamicalModel> clone() const override;

  const BassParams& params() const { return params_; }

 private:
  BassParams params_;
};

// Six-compartment congestion contagion model separating road-work and
// non-road-work accident pathways: S, W, A, A', I, R. Controls are
// (x1 treatment vehicles, x2 prevention vehicles), rate-normalized.
struct Sair2Params {
  double alpha_f = 0.0, beta_f = 0.0, rho_f = 0.0, zeta_f = 0.0;
  double alpha_w = 0.0, beta_w = 0.0, rho_w = 0.0, zeta_w = 0.0;
  double theta = 0.0;
  double budget1 = 1.0;     // fleet of treatment vehicles B1
  double budget2 = 1.0;     // fleet of prevention vehicles B2
  double dx = 0.0;          // intervention normalizer; defaults to budget1 when 0
  double dy = 0.0;          // defaults to budget2 when 0
  int n_segments = 1;       // neighborhoods sharing the fleet
  double c_congested = 1.0;
  double c_accident = 0.0;
  double c_accident_w = 0.0;

  double dx_eff() const { return dx > 0.0 ? dx : budget1; }
  double dy_eff() const { return dy > 0.0 ? dy : budget2; }
  void validate() const;
};

class Sair2Model final : public DynamicalModel {
 public:
  enum Comp { S = 0, W, A, Ap, I, R, kDim };

  explicit Sair2Model(Sair2Params params);

  std::string_view name() const override { return "sair2"; }
  int state_dim() const override { return kDim; }
  int control_dim() const override { return 2; }
  bool rate_normalized() const override { return true; }
  void derivative(double t, std::span<const double> state, std::span<const double> control,
                  std::span<double> out) const override;
  double running_cost(double t, std::span<const double> state) const override;
  std::vector<std::string> compartment_names() const override;
  std::vector<double> dynamics_parameters() const override;
  std::unique_ptr<DynamicalModel> with_dynamics_parameters(
      std::span<const double> params) const override;
  std::unique_ptr<DynamicalModel> clone() const override;

  const Sair2Params& params() const { return params_; }

 private:
  Sair2Params params_;
};

// One-dimensional synthetic system with polynomial control gain,
// da/dt = gain1 * x + gain2 * x^2, terminal cost h = h_weight * a(T).
// Used to build fixtures whose plan costs are strictly non-linear in the
// decision, which breaks plan averaging.
struct PolyGainParams {
  double gain1 = 0.0;
  double gain2 = 0.0;
  double h_weight = -1.0;

  void validate() const;
};

class PolyGainModel final : public DynamicalModel {
 public:
  explicit PolyGainModel(PolyGainParams params) : params_(params) { params_.validate(); }

  std::string_view name() const override { return "poly_gain"; }
  int state_dim() const override { return 1; }
  int control_dim() const override { return 1; }
  bool rate_normalized() const override { return false; }
  void derivative(double, std::span<const double>, std::span<const double> control,
                  std::span<double> out) const override {
    const double x = control[0];
    out[0] = params_.gain1 * x + params_.gain2 * x * x;
  }
  double terminal_cost(std::span<const double> state) const override {
    return params_.h_weight * state[0];
  }
  std::vector<std::string> compartment_names() const override { return {"a"}; }
  std::vector<double> dynamics_parameters() const override {
    return {params_.gain1, params_.gain2};
  }
  std::unique_ptr<DynamicalModel> with_dynamics_parameters(
      std::span<const double> p) const override {
    PolyGainParams q = params_;
    q.gain1 = p[0];
    q.gain2 = p[1];
    return std::make_unique<PolyGainModel>(q);
  }
  std::unique_ptr<DynamicalModel> clone() const override {
    return std::make_unique<PolyGainModel>(params_);
  }

  const PolyGainParams& params() const { return params_; }

 private:
  PolyGainParams params_;
};

// Documented synthetic parameter sets standing in for unpublished fits.
// Time unit: weeks; states are population fractions.
DelphiVParams delphi_synthetic_p0();  // mild wave, R0 ~ 1.5
DelphiVParams delphi_synthetic_p1();  // severe wave, R0 ~ 3.0

// Calibrated congestion parameters by period/region. Time unit: hours.
Sair2Params sair2_calibrated(const std::string& period, const std::string& region);

}  // namespace cbnp

#endif
