#ifndef CBNP_COMMON_HPP
#define CBNP_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbnp {

using StateVector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// State magnitudes beyond this abort integration as nonlinear blow-up.
inline constexpr double kDivergenceLimit = 1e12;

// Reduced-cost acceptance threshold for new columns (LP dual noise floor).
inline constexpr double kReducedCostTol = 1e-7;

inline constexpr double kFeasTol = 1e-8;
inline constexpr double kOptTol = 1e-7;
inline constexpr double kIntTol = 1e-6;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ConfigurationError : Error {
  using Error::Error;
};

struct StructuralError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

struct SizeError : Error {
  using Error::Error;
};

struct InfeasibleDecisionError : Error {
  using Error::Error;
};

struct DivergenceError : Error {
  int epoch;
  int substep;
  DivergenceError(const std::string& what, int epoch_, int substep_)
      : Error(what), epoch(epoch_), substep(substep_) {}
};

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace cbnp

#endif
