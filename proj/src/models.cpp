#include "cbnp/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cbnp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

void check_table(const TimeTable& tt, const char* what) {
  require(!tt.values.empty() && tt.breakpoints.size() == tt.values.size(), what);
  for (double v : tt.values) require(v >= 0.0, what);
}

}  // namespace

void DelphiVParams::validate() const {
  require(alpha >= 0.0, "delphi_v.alpha: must be >= 0");
  require(beta >= 0.0 && beta <= 1.0, "delphi_v.beta: must be in [0,1]");
  require(r_incubation >= 0.0, "delphi_v.r_incubation: must be >= 0");
  require(r_detection >= 0.0, "delphi_v.r_detection: must be >= 0");
  require(r_death >= 0.0, "delphi_v.r_death: must be >= 0");
  check_table(gamma, "delphi_v.gamma: non-negative values required");
  check_table(r_undetected, "delphi_v.r_undetected: non-negative values required");
  check_table(r_hospital, "delphi_v.r_hospital: non-negative values required");
  check_table(r_quarantine, "delphi_v.r_quarantine: non-negative values required");
  require(pallet_size > 0.0, "delphi_v.pallet_size: must be > 0");
  require(depletion_timescale > 0.0, "delphi_v.depletion_timescale: must be > 0");
}

DelphiVModel::DelphiVModel(DelphiVParams params) : params_(std::move(params)) {
  params_.validate();
}

void DelphiVModel::derivative(double t, std::span<const double> m,
                              std::span<const double> control,
                              std::span<double> out) const {
  const double xbar = control[0];
  if (xbar < 0.0) throw Error("delphi_v: negative vaccination rate");
  const DelphiVParams& p = params_;

  // Effective susceptible mass for new exposures, net of the vaccinated flow.
  const double s_eff = std::max(m[S] - p.beta * xbar, 0.0);
  const double exposure = p.alpha * p.gamma.at(t) * s_eff * m[I];
  // Transfer to immunized, capped so S cannot be driven below zero.
  const double transfer = std::min(p.beta * xbar, std::max(m[S], 0.0) / p.depletion_timescale);

  const double ru = p.r_undetected.at(t);
  const double rh = p.r_hospital.at(t);
  const double rq = p.r_quarantine.at(t);

  out[S] = -exposure - transfer;
  out[E] = exposure - p.r_incubation * m[E];
  out[I] = p.r_incubation * m[E] - p.r_detection * m[I];
  out[U] = ru * m[I] - p.r_death * m[U];
  out[H] = rh * m[I] - p.r_death * m[H];
  out[Q] = rq * m[I] - p.r_death * m[Q];
  out[D] = p.r_death * (m[U] + m[H] + m[Q]);
  out[M] = transfer;
  out[S2] = 0.0;
  out[E2] = 0.0;
  out[I2] = 0.0;
}

double DelphiVModel::terminal_cost(std::span<const double> m) const {
  const DelphiVParams& p = params_;
  return p.c_death * m[D] + p.c_hospital * m[H] + p.c_quarantine * m[Q] + p.c_exposed * m[E];
}

std::vector<std::string> DelphiVModel::compartment_names() const {
  return {"S", "E", "I", "U", "H", "Q", "D", "M", "S'", "E'", "I'"};
}

std::vector<double> DelphiVModel::dynamics_parameters() const {
  std::vector<double> v{params_.alpha, params_.beta, params_.r_incubation,
                        params_.r_detection, params_.r_death};
  auto push = [&v](const TimeTable& tt) {
    v.insert(v.end(), tt.values.begin(), tt.values.end());
  };
  push(params_.gamma);
  push(params_.r_undetected);
  push(params_.r_hospital);
  push(params_.r_quarantine);
  return v;
}

std::unique_ptr<DynamicalModel> DelphiVModel::with_dynamics_parameters(
    std::span<const double> v) const {
  DelphiVParams p = params_;
  size_t i = 0;
  p.alpha = v[i++];
  p.beta = std::clamp(v[i++], 0.0, 1.0);
  p.r_incubation = v[i++];
  p.r_detection = v[i++];
  p.r_death = v[i++];
  auto pull = [&v, &i](TimeTable& tt) {
    for (double& x : tt.values) x = v[i++];
  };
  pull(p.gamma);
  pull(p.r_undetected);
  pull(p.r_hospital);
  pull(p.r_quarantine);
  return std::make_unique<DelphiVModel>(p);
}

std::unique_ptr<DynamicalModel> DelphiVModel::clone() const {
  return std::make_unique<DelphiVModel>(params_);
}

void BassParams::validate() const {
  require(alpha >= 0.0, "bass.alpha: must be >= 0");
  require(beta >= 0.0, "bass.beta: must be >= 0");
  require(market_size > 0.0, "bass.market_size: must be > 0");
  require(increment > 0.0 && increment <= 1.0, "bass.increment: must be in (0,1]");
  require(sparsity >= 1, "bass.sparsity: must be >= 1");
}

BassModel::BassModel(BassParams params) : params_(params) { params_.validate(); }

void BassModel::derivative(double /*t*/, std::span<const double> m,
                           std::span<const double> control,
                           std::span<double> out) const {
  const double share = control[1];
  if (share < 0.0 || share > 1.0 + 1e-12)
    throw Error("bass: promoted share outside [0,1]");
  const double flow =
      params_.alpha * share * m[A] + (params_.beta / params_.market_size) * m[A] * m[B];
  out[A] = -flow;
  out[B] = flow;
}

double BassModel::terminal_cost(std::span<const double> m) const { return -m[B]; }

std::vector<std::string> BassModel::compartment_names() const { return {"A", "B"}; }

std::vector<double> BassModel::dynamics_parameters() const {
  return {params_.alpha, params_.beta, params_.market_size};
}

std::unique_ptr<DynamicalModel> BassModel::with_dynamics_parameters(
    std::span<const double> v) const {
  BassParams p = params_;
  p.alpha = v[0];
  p.beta = v[1];
  p.market_size = v[2];
  return std::make_unique<BassModel>(p);
}

std::unique_ptr<DynamicalModel> BassModel::clone() const {
  return std::make_unique<BassModel>(params_);
}

void Sair2Params::validate() const {
  for (double v : {alpha_f, beta_f, rho_f, zeta_f, alpha_w, beta_w, rho_w, zeta_w, theta})
    require(v >= 0.0, "sair2: rates must be >= 0");
  require(budget1 > 0.0 && budget2 > 0.0, "sair2: budgets must be > 0");
  require(n_segments >= 1, "sair2.n_segments: must be >= 1");
}

Sair2Model::Sair2Model(Sair2Params params) : params_(params) { params_.validate(); }

void Sair2Model::derivative(double /*t*/, std::span<const double> m,
                            std::span<const double> control,
                            std::span<double> out) const {
  const Sair2Params& p = params_;
  const double x1 = control[0];
  const double x2 = control[1];
  if (x1 < 0.0 || x2 < 0.0) throw Error("sair2: negative vehicle allocation");

  const double n = static_cast<double>(p.n_segments);
  auto psi = [&](double zeta) { return n * zeta / (2.0 * p.dx_eff()) * (x1 - p.budget1 / n); };
  auto phi = [&](double zeta) { return n * zeta / (2.0 * p.dy_eff()) * (x2 - p.budget2 / n); };

  const double infected_mass = m[I] + m[A] + m[Ap];
  const double dS = -p.alpha_f * m[S] * infected_mass - p.beta_f * m[S] +
                    p.rho_f * (p.zeta_f + psi(p.zeta_f)) * m[A];
  const double dA = p.beta_f * m[S] - p.rho_f * (p.zeta_f + psi(p.zeta_f)) * m[A] -
                    (1.0 - p.rho_f) * (p.zeta_f + phi(p.zeta_f)) * m[A];
  const double dW = -p.alpha_w * m[W] * infected_mass - p.beta_w * m[W] +
                    p.rho_w * (p.zeta_w + psi(p.zeta_w)) * m[Ap];
  const double dAp = p.beta_w * m[W] - p.rho_w * (p.zeta_w + psi(p.zeta_w)) * m[Ap] -
                     (1.0 - p.rho_w) * (p.zeta_w + phi(p.zeta_w)) * m[Ap];
  const double dR = p.theta * m[I];

  out[S] = dS;
  out[W] = dW;
  out[A] = dA;
  out[Ap] = dAp;
  out[I] = -(dS + dW + dA + dAp + dR);  // closure
  out[R] = dR;
}

double Sair2Model::running_cost(double /*t*/, std::span<const double> m) const {
  return params_.c_congested * m[I] + params_.c_accident * m[A] +
         params_.c_accident_w * m[Ap];
}

std::vector<std::string> Sair2Model::compartment_names() const {
  return {"S", "W", "A", "A'", "I", "R"};
}

std::vector<double> Sair2Model::dynamics_parameters() const {
  const Sair2Params& p = params_;
  return {p.alpha_f, p.beta_f, p.rho_f, p.zeta_f, p.alpha_w,
          p.beta_w,  p.rho_w, p.zeta_w, p.theta};
}

std::unique_ptr<DynamicalModel> Sair2Model::with_dynamics_parameters(
    std::span<const double> v) const {
  Sair2Params p = params_;
  p.alpha_f = v[0];
  p.beta_f = v[1];
  p.rho_f = v[2];
  p.zeta_f = v[3];
  p.alpha_w = v[4];
  p.beta_w = v[5];
  p.rho_w = v[6];
  p.zeta_w = v[7];
  p.theta = v[8];
  return std::make_unique<Sair2Model>(p);
}

std::unique_ptr<DynamicalModel> Sair2Model::clone() const {
  return std::make_unique<Sair2Model>(params_);
}

void PolyGainParams::validate() const {
  require(std::isfinite(gain1) && std::isfinite(gain2) && std::isfinite(h_weight),
          "poly_gain: parameters must be finite");
}

DelphiVParams delphi_synthetic_p0() {
  // Mild wave. Rates per week: 2-day latency, 5-day infectious period,
  // detection split 70/20/10 across U/H/Q, 3-week resolution to D.
  DelphiVParams p;
  p.alpha = 2.1;  // R0 = alpha / r_detection = 1.5
  p.gamma = TimeTable(1.0);
  p.beta = 0.9;
  p.r_incubation = 3.5;
  p.r_detection = 1.4;
  p.r_undetected = TimeTable(0.98);
  p.r_hospital = TimeTable(0.28);
  p.r_quarantine = TimeTable(0.14);
  p.r_death = 0.35;
  p.c_death = 1.0;
  p.c_exposed = 0.05;
  p.c_hospital = 0.2;
  p.c_quarantine = 0.1;
  p.pallet_size = 0.02;
  return p;
}

DelphiVParams delphi_synthetic_p1() {
  // Severe wave: doubled transmission, faster hospital saturation.
  DelphiVParams p = delphi_synthetic_p0();
  p.alpha = 4.2;  // R0 = 3.0
  p.r_undetected = TimeTable(0.84);
  p.r_hospital = TimeTable(0.42);
  p.r_quarantine = TimeTable(0.14);
  return p;
}

Sair2Params sair2_calibrated(const std::string& period, const std::string& region) {
  struct Row {
    double af, bf, rf, zf, aw, bw, rw, zw, th;
  };
  static const std::map<std::pair<std::string, std::string>, Row> table = {
      {{"morning", "west"}, {0.531, 0.578, 1.126, 0.569, 3.966, 1.585, 0.411, 4.835, 10.354}},
      {{"morning", "central"}, {0.000, 0.048, 0.034, 0.076, 1.224, 0.875, 1.180, 1.544, 2.135}},
      {{"morning", "northeast"}, {0.000, 0.137, 0.345, 0.078, 1.240, 0.198, 1.023, 2.273, 4.742}},
      {{"morning", "east"}, {0.052, 0.041, 0.432, 0.086, 2.745, 3.086, 1.201, 1.934, 3.950}},
      {{"morning", "north"}, {0.492, 0.562, 1.450, 2.043, 1.396, 0.896, 2.162, 1.878, 1.113}},
      {{"afternoon", "west"}, {0.897, 0.180, 1.913, 3.180, 2.852, 1.321, 1.208, 3.444, 2.512}},
      {{"afternoon", "central"}, {0.862, 0.070, 3.259, 1.144, 1.098, 1.026, 0.338, 1.831, 3.477}},
      {{"afternoon", "northeast"},
       {0.782, 0.024, 5.786, 0.283, 1.215, 2.360, 0.002, 3.555, 1.381}},
      {{"afternoon", "east"}, {0.838, 0.115, 2.143, 1.260, 0.000, 0.288, 0.000, 0.137, 1.283}},
      {{"afternoon", "north"}, {1.538, 0.196, 1.856, 1.656, 0.987, 1.085, 0.996, 0.930, 1.111}},
      {{"evening", "west"}, {0.091, 0.448, 1.249, 1.176, 0.568, 0.990, 2.194, 1.264, 3.775}},
      {{"evening", "central"}, {0.024, 0.331, 1.176, 0.793, 0.068, 0.733, 1.873, 1.335, 3.350}},
      {{"evening", "northeast"}, {0.018, 0.304, 1.247, 1.326, 0.116, 1.514, 1.728, 1.123, 2.861}},
      {{"evening", "east"}, {0.603, 0.191, 2.255, 1.141, 0.962, 0.985, 1.527, 1.517, 6.799}},
      {{"evening", "north"}, {0.001, 0.580, 0.905, 0.698, 1.148, 1.110, 1.136, 1.142, 4.264}},
  };
  auto it = table.find({period, region});
  if (it == table.end())
    throw ConfigurationError("sair2_calibrated: unknown period/region " + period + "/" + region);
  const Row& r = it->second;
  Sair2Params p;
  p.alpha_f = r.af;
  p.beta_f = r.bf;
  p.rho_f = r.rf;
  p.zeta_f = r.zf;
  p.alpha_w = r.aw;
  p.beta_w = r.bw;
  p.rho_w = r.rw;
  p.zeta_w = r.zw;
  p.theta = r.th;
  return p;
}

}  // namespace cbnp
