#include "cbnp/instance.hpp"

#include <cmath>

namespace cbnp {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::vaccine: return "vaccine";
    case ProblemKind::facility: return "facility";
    case ProblemKind::content: return "content";
    case ProblemKind::congestion: return "congestion";
    case ProblemKind::generic: return "generic";
  }
  return "generic";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "vaccine") return ProblemKind::vaccine;
  if (s == "facility") return ProblemKind::facility;
  if (s == "content") return ProblemKind::content;
  if (s == "congestion") return ProblemKind::congestion;
  if (s == "generic") return ProblemKind::generic;
  throw ValidationError("kind: unknown problem kind '" + s + "'");
}

void Instance::validate() const {
  grid.validate();
  if (segments.empty()) throw ValidationError("segments: at least one segment required");
  for (size_t i = 0; i < segments.size(); ++i) {
    const SegmentSpec& seg = segments[i];
    const std::string path = "segments[" + std::to_string(i) + "]";
    if (!seg.model) throw ValidationError(path + ".model: missing");
    if (static_cast<int>(seg.initial_state.size()) != seg.model->state_dim())
      throw ValidationError(path + ".initial_state: dimension mismatch (" +
                            std::to_string(seg.initial_state.size()) + " vs model " +
                            std::to_string(seg.model->state_dim()) + ")");
    if (!all_finite(seg.initial_state))
      throw ValidationError(path + ".initial_state: non-finite entry");
    if (static_cast<int>(seg.decision_sets.size()) != grid.epochs())
      throw ValidationError(path + ".decision_sets: need one set per epoch");
    for (size_t s = 0; s < seg.decision_sets.size(); ++s) {
      const auto& set = seg.decision_sets[s];
      const std::string spath = path + ".decision_sets[" + std::to_string(s) + "]";
      if (set.empty()) throw ValidationError(spath + ": empty decision set");
      for (size_t k = 0; k < set.size(); ++k) {
        if (static_cast<int>(set[k].values.size()) != seg.model->control_dim())
          throw ValidationError(spath + "[" + std::to_string(k) +
                                "]: decision dimension mismatch");
        if (!all_finite(set[k].values) || !std::isfinite(set[k].cost))
          throw ValidationError(spath + "[" + std::to_string(k) + "]: non-finite entry");
      }
    }
  }
  for (size_t j = 0; j < couplings.size(); ++j) {
    const CouplingRow& row = couplings[j];
    const std::string path = "couplings[" + std::to_string(j) + "]";
    if (row.epoch < 0 || row.epoch >= grid.epochs())
      throw ValidationError(path + ".epoch: out of range");
    if (!std::isfinite(row.rhs)) throw ValidationError(path + ".rhs: non-finite");
    if (static_cast<int>(row.u.size()) > n_segments())
      throw ValidationError(path + ".u: more entries than segments");
    for (size_t i = 0; i < row.u.size(); ++i) {
      if (row.u[i].empty()) continue;
      if (row.u[i].size() != segments[i].decision_sets[row.epoch][0].values.size())
        throw ValidationError(path + ".u[" + std::to_string(i) + "]: length must match the"
                              " segment's decision dimension");
      if (!all_finite(row.u[i]))
        throw ValidationError(path + ".u[" + std::to_string(i) + "]: non-finite entry");
    }
    if (static_cast<int>(row.v.size()) > static_cast<int>(aux.size()))
      throw ValidationError(path + ".v: more entries than auxiliary variables");
    if (!all_finite(row.v)) throw ValidationError(path + ".v: non-finite entry");
  }
  for (size_t a = 0; a < aux.size(); ++a) {
    if (aux[a].lb > aux[a].ub)
      throw ValidationError("aux[" + std::to_string(a) + "]: lb > ub");
  }
  if (config.eps < 0.0) throw ValidationError("config.eps: must be >= 0");
  if (config.gap < 0.0) throw ValidationError("config.gap: must be >= 0");
  if (config.substeps < 1) throw ValidationError("config.substeps: must be positive");
  if (config.clustering != "linf" && config.clustering != "kmeans" &&
      config.clustering != "none")
    throw ValidationError("config.clustering: must be linf, kmeans or none");
  if (config.node_selection != "best" && config.node_selection != "dfs")
    throw ValidationError("config.node_selection: must be best or dfs");
  if (config.branching != "tri" && config.branching != "bi")
    throw ValidationError("config.branching: must be tri or bi");
}

void Instance::apply_savings_form() {
  if (!maximize_savings) return;
  for (SegmentSpec& seg : segments) {
    if (seg.savings_form) continue;
    std::vector<int> idx(grid.epochs());
    for (int s = 0; s < grid.epochs(); ++s) idx[s] = seg.do_nothing_index(s);
    seg.baseline_cost = 0.0;
    seg.savings_form = false;
    seg.baseline_cost = evaluate_plan(seg, grid, idx);
    seg.savings_form = true;
  }
}

AllocationCheck validate_allocation(
    const Instance& inst, const std::vector<std::vector<std::vector<double>>>& allocation,
    const std::vector<double>& aux_values, double tol) {
  AllocationCheck out;
  auto fail = [&out](std::string why) {
    out.feasible = false;
    out.violation = std::move(why);
    return out;
  };
  if (static_cast<int>(allocation.size()) != inst.n_segments())
    return fail("allocation: wrong segment count");
  for (int i = 0; i < inst.n_segments(); ++i) {
    if (static_cast<int>(allocation[i].size()) != inst.grid.epochs())
      return fail("allocation[" + std::to_string(i) + "]: wrong epoch count");
    for (int s = 0; s < inst.grid.epochs(); ++s) {
      if (inst.segments[i].find_decision(s, allocation[i][s], 1e-6) < 0)
        return fail("segment " + inst.segments[i].id + ", epoch " + std::to_string(s) +
                    ": decision not in feasible set");
    }
  }
  for (const CouplingRow& row : inst.couplings) {
    double lhs = 0.0;
    for (int i = 0; i < inst.n_segments(); ++i)
      lhs += row.u_dot(i, allocation[i][row.epoch]);
    for (size_t a = 0; a < aux_values.size(); ++a) lhs += row.v_at(static_cast<int>(a)) * aux_values[a];
    const double slack = lhs - row.rhs;
    const bool ok = row.sense == RowSense::le   ? slack <= tol
                    : row.sense == RowSense::ge ? slack >= -tol
                                                : std::abs(slack) <= tol;
    if (!ok)
      return fail("coupling row '" + row.name + "' violated by " + std::to_string(slack));
  }
  for (size_t a = 0; a < aux_values.size() && a < inst.aux.size(); ++a) {
    if (aux_values[a] < inst.aux[a].lb - tol || aux_values[a] > inst.aux[a].ub + tol)
      return fail("aux '" + inst.aux[a].name + "' out of bounds");
    if (inst.aux[a].integral && std::abs(aux_values[a] - std::round(aux_values[a])) > kIntTol)
      return fail("aux '" + inst.aux[a].name + "' not integral");
  }
  return out;
}

}  // namespace cbnp
