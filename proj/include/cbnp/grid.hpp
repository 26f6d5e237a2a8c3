#ifndef CBNP_GRID_HPP
#define CBNP_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "cbnp/common.hpp"

namespace cbnp {

// Decision epochs [tau_s, tau_{s+1}), s = 0..S-1, with tau_0 = 0.
struct EpochGrid {
  std::vector<double> timestamps;  // size S+1, strictly increasing
  int substeps_per_epoch = 20;

  int epochs() const { return static_cast<int>(timestamps.size()) - 1; }
  double horizon() const { return timestamps.back(); }
  double duration(int s) const { return timestamps[s + 1] - timestamps[s]; }
  double max_duration() const {
    double d = 0.0;
    for (int s = 0; s < epochs(); ++s) d = std::max(d, duration(s));
    return d;
  }

  void validate() const {
    if (timestamps.size() < 2)
      throw ValidationError("grid.timestamps: need at least two timestamps");
    if (timestamps.front() != 0.0)
      throw ValidationError("grid.timestamps: first timestamp must be 0");
    for (size_t i = 0; i + 1 < timestamps.size(); ++i)
      if (!(timestamps[i] < timestamps[i + 1]))
        throw ValidationError("grid.timestamps[" + std::to_string(i + 1) +
                              "]: timestamps must be strictly increasing");
    if (substeps_per_epoch < 1)
      throw ValidationError("grid.substeps_per_epoch: must be positive");
  }

  bool operator==(const EpochGrid&) const = default;
};

}  // namespace cbnp

#endif
