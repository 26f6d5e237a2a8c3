#ifndef CBNP_INSTANCE_HPP
#define CBNP_INSTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cbnp/segment.hpp"

namespace cbnp {

enum class ProblemKind { vaccine, facility, content, congestion, generic };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

enum class RowSense { le, ge, eq };

// One linear coupling constraint at a given epoch:
//   sum_i u_i . x_is  +  v . y   (sense)   rhs
struct CouplingRow {
  std::string name;
  int epoch = 0;
  std::vector<std::vector<double>> u;  // per segment; empty vector means all-zero
  std::vector<double> v;               // per auxiliary variable; may be shorter (zero-padded)
  RowSense sense = RowSense::le;
  double rhs = 0.0;

  double u_dot(int segment, std::span<const double> x) const {
    if (segment >= static_cast<int>(u.size()) || u[segment].empty()) return 0.0;
    double acc = 0.0;
    for (size_t c = 0; c < x.size() && c < u[segment].size(); ++c)
      acc += u[segment][c] * x[c];
    return acc;
  }
  double v_at(int aux) const {
    return aux < static_cast<int>(v.size()) ? v[aux] : 0.0;
  }
};

struct AuxVar {
  std::string name;
  double cost = 0.0;
  double lb = 0.0;
  double ub = kInf;
  bool integral = false;
};

// Vaccination-center layout; expanded into auxiliary variables and coupling
// rows (budget, capacity, coverage, linking, consistency, cardinality) at load.
struct FacilityLayout {
  int select_count = 0;                         // K
  std::vector<std::string> facility_ids;        // size F
  std::vector<std::vector<double>> capacity;    // [facility][epoch]
  std::vector<std::vector<double>> coverage;    // P_ij, [segment][facility]
  std::vector<double> budget;                   // B_s, per epoch
  bool integral_flows = true;

  // Resolved at load: indices into Instance::aux.
  std::vector<int> y_index;                            // per facility
  std::vector<std::vector<std::vector<int>>> flow_index;  // [segment][facility][epoch]
};

struct SolverConfig {
  double eps = 0.01;          // l-inf cluster diameter tolerance; 0 disables clustering
  double gap = 0.001;         // relative optimality gap tolerance
  double time_limit = kInf;   // seconds
  int substeps = 20;
  uint64_t seed = 1;
  long enumeration_cap = 10'000'000;  // max state-decision pairs in forward enumeration
  int colgen_iteration_cap = 500;
  int heuristic_node_cap = 10'000;
  std::string clustering = "linf";  // linf | kmeans | none
  int kmeans_clusters = 8;
  bool exact_finish = false;
  std::string node_selection = "best";  // best | dfs
  std::string branching = "tri";        // tri | bi
  int threads = 1;
};

struct Instance {
  int schema_version = 1;
  ProblemKind kind = ProblemKind::generic;
  EpochGrid grid;
  std::vector<SegmentSpec> segments;
  std::vector<CouplingRow> couplings;
  std::vector<AuxVar> aux;
  std::optional<FacilityLayout> facility;
  bool maximize_savings = false;
  std::vector<double> aux_cost_sense_applied;  // unused placeholder for forward compat
  SolverConfig config;

  int n_segments() const { return static_cast<int>(segments.size()); }

  void validate() const;

  // Computes per-segment do-nothing baselines and flips segments into savings
  // form. Idempotent.
  void apply_savings_form();
};

// Checks an explicit allocation (per segment, per epoch decision values plus
// auxiliary values) against feasible sets and every coupling row.
struct AllocationCheck {
  bool feasible = true;
  std::string violation;  // first violated constraint, human-readable
};
AllocationCheck validate_allocation(
    const Instance& inst, const std::vector<std::vector<std::vector<double>>>& allocation,
    const std::vector<double>& aux_values, double tol = 1e-9);

}  // namespace cbnp

#endif
