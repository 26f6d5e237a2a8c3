#include "cbnp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cbnp/rng.hpp"

namespace cbnp {

namespace {

double linf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double terminal_offset(const SegmentSpec& segment) {
  return segment.savings_form ? -segment.baseline_cost : 0.0;
}

}  // namespace

FilteredSets unrestricted_sets(const SegmentSpec& segment) {
  FilteredSets sets(segment.decision_sets.size());
  for (size_t s = 0; s < segment.decision_sets.size(); ++s) {
    sets[s].resize(segment.decision_sets[s].size());
    std::iota(sets[s].begin(), sets[s].end(), 0);
  }
  return sets;
}

PricingSpace forward_enumerate(const SegmentSpec& segment, const EpochGrid& grid,
                               const FilteredSets& sets, long pair_cap) {
  const int S = grid.epochs();
  const int dim = segment.model->state_dim();

  long pairs = 0, count = 1;
  for (int s = 0; s < S; ++s) {
    const long d = static_cast<long>(sets[s].size());
    if (d == 0) throw InfeasibleDecisionError("segment " + segment.id +
                                              ": empty feasible set at epoch " +
                                              std::to_string(s));
    if (count > pair_cap / d)
      throw SizeError("forward enumeration would exceed " + std::to_string(pair_cap) +
                      " state-decision pairs; use state clustering instead");
    count *= d;
    pairs += count;
    if (pairs > pair_cap)
      throw SizeError("forward enumeration would exceed " + std::to_string(pair_cap) +
                      " state-decision pairs; use state clustering instead");
  }

  PricingSpace space;
  space.dim = dim;
  space.epochs = S;
  space.clustered = false;
  space.decisions = sets;
  space.states.resize(S + 1);
  space.arc_cost.resize(S);
  space.arc_succ.resize(S);
  space.states[0] = segment.initial_state;

  EpochStepper stepper(*segment.model, grid);
  const double offset = terminal_offset(segment);
  for (int s = 0; s < S; ++s) {
    const long n_states = space.count(s);
    const long d_count = static_cast<long>(sets[s].size());
    space.states[s + 1].resize(n_states * d_count * dim);
    space.arc_cost[s].resize(n_states * d_count);
    space.arc_succ[s].resize(n_states * d_count);
    for (long q = 0; q < n_states; ++q) {
      const std::span<const double> state = space.state(s, q);
      for (long d = 0; d < d_count; ++d) {
        const Decision& dec = segment.decision_sets[s][sets[s][d]];
        EpochResult r = stepper.advance(s, state, dec.values);
        const long arc = q * d_count + d;
        double cost = r.cost + dec.cost;
        if (s == S - 1) cost += segment.model->terminal_cost(r.state) + offset;
        space.arc_cost[s][arc] = cost;
        space.arc_succ[s][arc] = static_cast<int32_t>(arc);
        std::copy(r.state.begin(), r.state.end(),
                  space.states[s + 1].begin() + arc * dim);
      }
    }
  }
  return space;
}

StreamingClusterer::StreamingClusterer(int dim, double eps) : dim_(dim), eps_(eps) {}

int StreamingClusterer::assign(std::span<const double> point, double raw_cost) {
  const int k = clusters();
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int l = 0; l < k; ++l) {
    const double* lo = lo_.data() + static_cast<size_t>(l) * dim_;
    const double* hi = hi_.data() + static_cast<size_t>(l) * dim_;
    double dist = 0.0;
    for (int c = 0; c < dim_; ++c) {
      dist = std::max(dist, std::abs(point[c] - lo[c]));
      dist = std::max(dist, std::abs(point[c] - hi[c]));
      if (dist >= best_dist) break;  // cannot become the minimizer
    }
    if (dist < best_dist) {  // strict: ties keep the lowest index
      best_dist = dist;
      best = l;
    }
  }
  if (best >= 0 && best_dist <= eps_) {
    double* sum = sum_.data() + static_cast<size_t>(best) * dim_;
    double* lo = lo_.data() + static_cast<size_t>(best) * dim_;
    double* hi = hi_.data() + static_cast<size_t>(best) * dim_;
    for (int c = 0; c < dim_; ++c) {
      sum[c] += point[c];
      lo[c] = std::min(lo[c], point[c]);
      hi[c] = std::max(hi[c], point[c]);
    }
    counts_[best] += 1;
    cost_sum_[best] += raw_cost;
    return best;
  }
  sum_.insert(sum_.end(), point.begin(), point.end());
  lo_.insert(lo_.end(), point.begin(), point.end());
  hi_.insert(hi_.end(), point.begin(), point.end());
  counts_.push_back(1);
  cost_sum_.push_back(raw_cost);
  return clusters() - 1;
}

std::vector<double> StreamingClusterer::centroid(int cluster) const {
  std::vector<double> c(dim_);
  const double* sum = sum_.data() + static_cast<size_t>(cluster) * dim_;
  for (int i = 0; i < dim_; ++i) c[i] = sum[i] / counts_[cluster];
  return c;
}

double StreamingClusterer::diameter(int cluster) const {
  const double* lo = lo_.data() + static_cast<size_t>(cluster) * dim_;
  const double* hi = hi_.data() + static_cast<size_t>(cluster) * dim_;
  double d = 0.0;
  for (int i = 0; i < dim_; ++i) d = std::max(d, hi[i] - lo[i]);
  return d;
}

namespace {

void finalize_epoch(PricingSpace& space, int s, int dim,
                    const std::vector<double>& centroids,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    const std::vector<long>& counts,
                    const std::vector<double>& mean_cost,
                    const std::vector<int32_t>& succ,
                    const std::vector<double>& gamma_cost) {
  space.states[s + 1] = centroids;
  space.cluster_lo[s + 1] = lo;
  space.cluster_hi[s + 1] = hi;
  space.arc_succ[s] = succ;
  space.arc_cost[s].resize(succ.size());
  for (size_t arc = 0; arc < succ.size(); ++arc)
    space.arc_cost[s][arc] = mean_cost[succ[arc]] + gamma_cost[arc];

  EpochClusterStats st;
  st.clusters = static_cast<int>(counts.size());
  double dist_sum = 0.0;
  for (size_t l = 0; l < counts.size(); ++l) {
    double diam = 0.0;
    for (int c = 0; c < dim; ++c)
      diam = std::max(diam, hi[l * dim + c] - lo[l * dim + c]);
    st.max_diameter = std::max(st.max_diameter, diam);
  }
  // Member-to-centroid distances need a second pass over the raw points; the
  // caller fills them in when it kept the points around.
  (void)dist_sum;
  space.stats[s] = st;
}

}  // namespace

PricingSpace cluster_states(const SegmentSpec& segment, const EpochGrid& grid,
                            double eps, const FilteredSets& sets) {
  const int S = grid.epochs();
  const int dim = segment.model->state_dim();

  PricingSpace space;
  space.dim = dim;
  space.epochs = S;
  space.clustered = true;
  space.decisions = sets;
  space.states.resize(S + 1);
  space.arc_cost.resize(S);
  space.arc_succ.resize(S);
  space.stats.resize(S);
  space.cluster_lo.resize(S + 1);
  space.cluster_hi.resize(S + 1);
  space.states[0] = segment.initial_state;
  space.cluster_lo[0] = segment.initial_state;
  space.cluster_hi[0] = segment.initial_state;

  EpochStepper stepper(*segment.model, grid);
  const double offset = terminal_offset(segment);
  for (int s = 0; s < S; ++s) {
    const long n_states = space.count(s);
    const long d_count = static_cast<long>(sets[s].size());
    if (d_count == 0)
      throw InfeasibleDecisionError("segment " + segment.id +
                                    ": empty feasible set at epoch " + std::to_string(s));
    StreamingClusterer clusterer(dim, eps);
    std::vector<int32_t> succ(n_states * d_count);
    std::vector<double> gamma_cost(n_states * d_count);
    std::vector<double> points;
    points.reserve(n_states * d_count * dim);
    for (long q = 0; q < n_states; ++q) {
      const std::span<const double> state = space.state(s, q);
      for (long d = 0; d < d_count; ++d) {
        const Decision& dec = segment.decision_sets[s][sets[s][d]];
        EpochResult r = stepper.advance(s, state, dec.values);
        double chi = r.cost;
        if (s == S - 1) chi += segment.model->terminal_cost(r.state) + offset;
        const long arc = q * d_count + d;
        succ[arc] = static_cast<int32_t>(clusterer.assign(r.state, chi));
        gamma_cost[arc] = dec.cost;
        points.insert(points.end(), r.state.begin(), r.state.end());
      }
    }
    const int k = clusterer.clusters();
    std::vector<double> centroids(static_cast<size_t>(k) * dim);
    std::vector<double> lo(static_cast<size_t>(k) * dim), hi(static_cast<size_t>(k) * dim);
    std::vector<long> counts(k);
    std::vector<double> mean_cost(k);
    for (int l = 0; l < k; ++l) {
      const std::vector<double> c = clusterer.centroid(l);
      std::copy(c.begin(), c.end(), centroids.begin() + static_cast<size_t>(l) * dim);
      std::copy(clusterer.lo(l).begin(), clusterer.lo(l).end(),
                lo.begin() + static_cast<size_t>(l) * dim);
      std::copy(clusterer.hi(l).begin(), clusterer.hi(l).end(),
                hi.begin() + static_cast<size_t>(l) * dim);
      counts[l] = clusterer.count(l);
      mean_cost[l] = clusterer.mean_cost(l);
    }
    finalize_epoch(space, s, dim, centroids, lo, hi, counts, mean_cost, succ, gamma_cost);

    EpochClusterStats& st = space.stats[s];
    st.members = static_cast<long>(succ.size());
    double dist_sum = 0.0;
    for (size_t arc = 0; arc < succ.size(); ++arc) {
      const std::span<const double> pt{points.data() + arc * dim, (size_t)dim};
      const std::span<const double> mu{centroids.data() + (size_t)succ[arc] * dim, (size_t)dim};
      const double dist = linf(pt, mu);
      dist_sum += dist;
      st.max_centroid_distance = std::max(st.max_centroid_distance, dist);
    }
    st.mean_centroid_distance = succ.empty() ? 0.0 : dist_sum / succ.size();
  }
  return space;
}

namespace {

// Deterministic Lloyd's algorithm in l2, k-means++ seeding, 50-iteration cap.
std::vector<int32_t> lloyd(const std::vector<double>& points, long n, int dim, int k,
                           SplitMix64& rng, std::vector<double>& centroids_out) {
  auto sq_dist = [&](const double* a, const double* b) {
    double acc = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = a[c] - b[c];
      acc += d * d;
    }
    return acc;
  };

  std::vector<double> centroids;
  centroids.reserve(static_cast<size_t>(k) * dim);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  {  // k-means++ seeding
    const long first = static_cast<long>(rng.below(static_cast<uint64_t>(n)));
    centroids.insert(centroids.end(), points.begin() + first * dim,
                     points.begin() + (first + 1) * dim);
    for (int l = 1; l < k; ++l) {
      double total = 0.0;
      for (long q = 0; q < n; ++q) {
        const double d = sq_dist(points.data() + q * dim,
                                 centroids.data() + static_cast<size_t>(l - 1) * dim);
        min_dist[q] = std::min(min_dist[q], d);
        total += min_dist[q];
      }
      long pick = 0;
      if (total > 0.0) {
        double target = rng.uniform() * total, acc = 0.0;
        for (long q = 0; q < n; ++q) {
          acc += min_dist[q];
          if (acc >= target) {
            pick = q;
            break;
          }
        }
      } else {
        pick = static_cast<long>(rng.below(static_cast<uint64_t>(n)));
      }
      centroids.insert(centroids.end(), points.begin() + pick * dim,
                       points.begin() + (pick + 1) * dim);
    }
  }

  std::vector<int32_t> assign(n, 0);
  std::vector<double> sums(static_cast<size_t>(k) * dim);
  std::vector<long> counts(k);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (long q = 0; q < n; ++q) {
      const double* p = points.data() + q * dim;
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int l = 0; l < k; ++l) {
        const double d = sq_dist(p, centroids.data() + static_cast<size_t>(l) * dim);
        if (d < best_d) {
          best_d = d;
          best = l;
        }
      }
      if (assign[q] != best) {
        assign[q] = static_cast<int32_t>(best);
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0L);
    for (long q = 0; q < n; ++q) {
      const double* p = points.data() + q * dim;
      double* sum = sums.data() + static_cast<size_t>(assign[q]) * dim;
      for (int c = 0; c < dim; ++c) sum[c] += p[c];
      counts[assign[q]] += 1;
    }
    for (int l = 0; l < k; ++l) {
      if (counts[l] == 0) {
        // Re-seed an empty cluster on the point farthest from its centroid.
        long far = 0;
        double far_d = -1.0;
        for (long q = 0; q < n; ++q) {
          const double d = sq_dist(points.data() + q * dim,
                                   centroids.data() + static_cast<size_t>(assign[q]) * dim);
          if (d > far_d) {
            far_d = d;
            far = q;
          }
        }
        std::copy(points.begin() + far * dim, points.begin() + (far + 1) * dim,
                  centroids.begin() + static_cast<size_t>(l) * dim);
        assign[far] = static_cast<int32_t>(l);
        continue;
      }
      for (int c = 0; c < dim; ++c)
        centroids[static_cast<size_t>(l) * dim + c] = sums[static_cast<size_t>(l) * dim + c] / counts[l];
    }
  }
  centroids_out = std::move(centroids);
  return assign;
}

}  // namespace

PricingSpace kmeans_cluster(const SegmentSpec& segment, const EpochGrid& grid,
                            std::span<const int> clusters_per_epoch, uint64_t seed,
                            const FilteredSets& sets) {
  const int S = grid.epochs();
  const int dim = segment.model->state_dim();
  if (clusters_per_epoch.empty())
    throw ConfigurationError("kmeans_cluster: need at least one cluster count");

  PricingSpace space;
  space.dim = dim;
  space.epochs = S;
  space.clustered = true;
  space.decisions = sets;
  space.states.resize(S + 1);
  space.arc_cost.resize(S);
  space.arc_succ.resize(S);
  space.stats.resize(S);
  space.cluster_lo.resize(S + 1);
  space.cluster_hi.resize(S + 1);
  space.states[0] = segment.initial_state;
  space.cluster_lo[0] = segment.initial_state;
  space.cluster_hi[0] = segment.initial_state;

  EpochStepper stepper(*segment.model, grid);
  const double offset = terminal_offset(segment);
  for (int s = 0; s < S; ++s) {
    const long n_states = space.count(s);
    const long d_count = static_cast<long>(sets[s].size());
    const long pairs = n_states * d_count;
    std::vector<double> points(pairs * dim);
    std::vector<double> chi(pairs);
    std::vector<double> gamma_cost(pairs);
    for (long q = 0; q < n_states; ++q) {
      const std::span<const double> state = space.state(s, q);
      for (long d = 0; d < d_count; ++d) {
        const Decision& dec = segment.decision_sets[s][sets[s][d]];
        EpochResult r = stepper.advance(s, state, dec.values);
        const long arc = q * d_count + d;
        chi[arc] = r.cost;
        if (s == S - 1) chi[arc] += segment.model->terminal_cost(r.state) + offset;
        gamma_cost[arc] = dec.cost;
        std::copy(r.state.begin(), r.state.end(), points.begin() + arc * dim);
      }
    }

    int k = clusters_per_epoch.size() == 1 ? clusters_per_epoch[0]
                                           : clusters_per_epoch[s];
    if (k < 1) throw ConfigurationError("kmeans_cluster: k must be >= 1");
    k = static_cast<int>(std::min<long>(k, pairs));

    SplitMix64 rng = substream(seed, "kmeans", static_cast<uint64_t>(s));
    std::vector<double> centroids;
    std::vector<int32_t> assign = lloyd(points, pairs, dim, k, rng, centroids);

    std::vector<long> counts(k, 0);
    std::vector<double> cost_sum(k, 0.0);
    std::vector<double> lo(static_cast<size_t>(k) * dim, kInf);
    std::vector<double> hi(static_cast<size_t>(k) * dim, -kInf);
    for (long arc = 0; arc < pairs; ++arc) {
      const int l = assign[arc];
      counts[l] += 1;
      cost_sum[l] += chi[arc];
      for (int c = 0; c < dim; ++c) {
        const double v = points[arc * dim + c];
        lo[static_cast<size_t>(l) * dim + c] = std::min(lo[static_cast<size_t>(l) * dim + c], v);
        hi[static_cast<size_t>(l) * dim + c] = std::max(hi[static_cast<size_t>(l) * dim + c], v);
      }
    }
    std::vector<double> mean_cost(k);
    for (int l = 0; l < k; ++l) mean_cost[l] = cost_sum[l] / std::max(counts[l], 1L);

    finalize_epoch(space, s, dim, centroids, lo, hi, counts, mean_cost, assign, gamma_cost);

    EpochClusterStats& st = space.stats[s];
    st.members = pairs;
    double dist_sum = 0.0;
    for (long arc = 0; arc < pairs; ++arc) {
      const std::span<const double> pt{points.data() + arc * dim, (size_t)dim};
      const std::span<const double> mu{centroids.data() + (size_t)assign[arc] * dim, (size_t)dim};
      const double dist = linf(pt, mu);
      dist_sum += dist;
      st.max_centroid_distance = std::max(st.max_centroid_distance, dist);
    }
    st.mean_centroid_distance = pairs == 0 ? 0.0 : dist_sum / pairs;
  }
  return space;
}

PricingResult backward_induct(const PricingSpace& space, const SegmentDuals& duals) {
  const int S = space.epochs;
  std::vector<std::vector<double>> value(S + 1);
  std::vector<std::vector<int32_t>> policy(S);
  value[S].assign(space.count(S), 0.0);

  for (int s = S - 1; s >= 0; --s) {
    const long n_states = space.count(s);
    const long d_count = static_cast<long>(space.decisions[s].size());
    value[s].assign(n_states, kInf);
    policy[s].assign(n_states, 0);
    const double mu_term = (s == S - 1) ? duals.mu : 0.0;
    for (long q = 0; q < n_states; ++q) {
      double best = kInf;
      int32_t best_d = 0;
      for (long d = 0; d < d_count; ++d) {
        const long arc = q * d_count + d;
        const double c = space.arc_cost[s][arc] - duals.decision_price[s][d] - mu_term +
                         value[s + 1][space.arc_succ[s][arc]];
        if (c < best) {
          best = c;
          best_d = static_cast<int32_t>(d);
        }
      }
      value[s][q] = best;
      policy[s][q] = best_d;
    }
  }

  PricingResult out;
  out.reduced_cost = value[0][0];
  long q = 0;
  for (int s = 0; s < S; ++s) {
    const long d_count = static_cast<long>(space.decisions[s].size());
    const int32_t d = policy[s][q];
    out.decision_idx.push_back(space.decisions[s][d]);
    const long arc = q * d_count + d;
    out.plan_cost += space.arc_cost[s][arc];
    q = space.arc_succ[s][arc];
  }
  return out;
}

std::vector<double> estimate_lipschitz(const SegmentSpec& segment, const EpochGrid& grid,
                                       const PricingSpace& exact_space,
                                       const FilteredSets& sets) {
  const DynamicalModel& model = *segment.model;
  const int dim = model.state_dim();
  std::vector<double> fp(dim), fm(dim), x(dim);
  std::vector<double> control;

  auto jacobian_norm = [&](std::span<const double> state, double t,
                           std::span<const double> ctrl) {
    std::vector<double> row_sum(dim, 0.0);
    for (int j = 0; j < dim; ++j) {
      std::copy(state.begin(), state.end(), x.begin());
      const double h = std::max(1e-7, 1e-7 * std::abs(state[j]));
      x[j] = state[j] + h;
      model.derivative(t, x, ctrl, fp);
      x[j] = state[j] - h;
      model.derivative(t, x, ctrl, fm);
      for (int i = 0; i < dim; ++i) row_sum[i] += std::abs(fp[i] - fm[i]) / (2.0 * h);
    }
    return *std::max_element(row_sum.begin(), row_sum.end());
  };

  std::vector<double> lipschitz(grid.epochs(), 0.0);
  for (int s = 0; s < grid.epochs(); ++s) {
    const double t_mid = grid.timestamps[s] + 0.5 * grid.duration(s);
    const double scale = model.rate_normalized() ? 1.0 / grid.duration(s) : 1.0;
    const long n_states = exact_space.count(s);
    const long d_count = static_cast<long>(sets[s].size());
    for (long d = 0; d < d_count; ++d) {
      const Decision& dec = segment.decision_sets[s][sets[s][d]];
      control.assign(dec.values.begin(), dec.values.end());
      for (double& c : control) c *= scale;
      for (long q = 0; q < n_states; ++q) {
        lipschitz[s] = std::max(lipschitz[s],
                                jacobian_norm(exact_space.state(s, q), t_mid, control));
        // The arc endpoint is traversed at the close of the interval.
        const long arc = q * d_count + d;
        lipschitz[s] = std::max(
            lipschitz[s],
            jacobian_norm(exact_space.state(s + 1, exact_space.arc_succ[s][arc]), t_mid,
                          control));
      }
    }
  }
  return lipschitz;
}

}  // namespace cbnp
