#ifndef CBNP_PRICING_HPP
#define CBNP_PRICING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cbnp/segment.hpp"

namespace cbnp {

// Restrictions a tree node imposes on one segment's feasible sets: the
// surviving decision indices per epoch (into the declared decision lists).
using FilteredSets = std::vector<std::vector<int>>;  // [epoch][k] -> declared index

FilteredSets unrestricted_sets(const SegmentSpec& segment);

// Per-epoch cluster diagnostics.
struct EpochClusterStats {
  int clusters = 0;
  double max_diameter = 0.0;          // max over clusters of ||hi - lo||_inf
  double mean_centroid_distance = 0;  // mean l-inf distance member -> centroid
  double max_centroid_distance = 0;
  long members = 0;
};

// State space for one segment's pricing problem, either exhaustive or
// clustered. Epoch e holds count(e) states (flat, row-major); an arc
// (state q, local decision d) at epoch e has cost arc_cost[e][q*D+d]
// (integral of g, allocation cost, and the terminal cost folded into the
// last epoch) and successor state arc_succ[e][q*D+d] at epoch e+1.
struct PricingSpace {
  int dim = 0;
  int epochs = 0;
  bool clustered = false;
  FilteredSets decisions;                        // local -> declared decision index
  std::vector<std::vector<double>> states;       // e = 0..S, flat count*dim
  std::vector<std::vector<double>> arc_cost;     // e = 0..S-1
  std::vector<std::vector<int32_t>> arc_succ;    // e = 0..S-1
  std::vector<EpochClusterStats> stats;          // e = 1..S (index e-1), clustered only
  std::vector<std::vector<double>> cluster_lo;   // envelopes, clustered only
  std::vector<std::vector<double>> cluster_hi;

  long count(int epoch) const {
    return static_cast<long>(states[epoch].size()) / dim;
  }
  long total_states() const {
    long total = 0;
    for (const auto& s : states) total += static_cast<long>(s.size()) / dim;
    return total;
  }
  std::span<const double> state(int epoch, long q) const {
    return {states[epoch].data() + q * dim, static_cast<size_t>(dim)};
  }
};

// Exhaustive forward enumeration (no deduplication): |N_{e+1}| = |N_e| * D_e.
// Throws SizeError when the total number of state-decision pairs would exceed
// the cap.
PricingSpace forward_enumerate(const SegmentSpec& segment, const EpochGrid& grid,
                               const FilteredSets& sets, long pair_cap = 10'000'000);

// Streaming l-inf clusterer with guaranteed cluster diameter <= eps.
// A candidate joins the cluster minimizing max(||p - lo||_inf, ||p - hi||_inf)
// when that minimum is within eps (ties to the lowest cluster index), and
// opens a new cluster otherwise.
class StreamingClusterer {
 public:
  StreamingClusterer(int dim, double eps);

  int assign(std::span<const double> point, double raw_cost);

  int clusters() const { return static_cast<int>(counts_.size()); }
  long count(int cluster) const { return counts_[cluster]; }
  double mean_cost(int cluster) const { return cost_sum_[cluster] / counts_[cluster]; }
  std::vector<double> centroid(int cluster) const;
  std::span<const double> lo(int cluster) const { return {lo_.data() + cluster * dim_, (size_t)dim_}; }
  std::span<const double> hi(int cluster) const { return {hi_.data() + cluster * dim_, (size_t)dim_}; }
  double diameter(int cluster) const;

 private:
  int dim_;
  double eps_;
  std::vector<double> sum_, lo_, hi_;
  std::vector<long> counts_;
  std::vector<double> cost_sum_;
};

// State-clustering acceleration: one streaming pass per epoch over all
// |N_e| x |F_e| successors in deterministic order (states in creation order,
// decisions in declared order).
PricingSpace cluster_states(const SegmentSpec& segment, const EpochGrid& grid,
                            double eps, const FilteredSets& sets);

// k-means benchmark clusterer: seeded k-means++ initialization, Lloyd
// iterations capped at 50, identical cost/transition map construction.
// clusters_per_epoch may hold one entry (same k everywhere) or one per epoch.
PricingSpace kmeans_cluster(const SegmentSpec& segment, const EpochGrid& grid,
                            std::span<const int> clusters_per_epoch, uint64_t seed,
                            const FilteredSets& sets);

// Dual prices seen by one segment's pricing problem.
struct SegmentDuals {
  // Price subtracted from the stage cost of (epoch, local decision):
  // sum_j lambda_sj * u_sji . b_d.
  std::vector<std::vector<double>> decision_price;
  double mu = 0.0;
};

struct PricingResult {
  std::vector<int> decision_idx;  // declared indices, one per epoch
  double reduced_cost = 0.0;      // DP objective: stage costs - prices - mu
  double plan_cost = 0.0;         // sum of raw stage costs along the path
};

// Backward induction over an exact or clustered space, then forward replay of
// the argmin policy from the initial state.
PricingResult backward_induct(const PricingSpace& space, const SegmentDuals& duals);

// Numerically estimated per-epoch Lipschitz constants of the transition in
// the l-inf metric (max row sum of the Jacobian, sampled across the given
// states and all decisions of the epoch, by central differences).
std::vector<double> estimate_lipschitz(const SegmentSpec& segment, const EpochGrid& grid,
                                       const PricingSpace& exact_space,
                                       const FilteredSets& sets);

}  // namespace cbnp

#endif
