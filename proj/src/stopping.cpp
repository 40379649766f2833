#include "abpl/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace abpl {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::relerr_delta: return "relerr_delta";
    case StopReason::time_limit: return "time_limit";
    case StopReason::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

StopState::StopState(double initial_relerr, StopLimits limits)
    : last_relerr_(initial_relerr), limits_(limits) {
  if (!(limits_.eps >= 0.0)) throw std::invalid_argument("StopState: eps must be nonnegative");
}

StopReason StopState::check(double new_relerr, double elapsed_s, std::size_t k) {
  last_delta_ = std::abs(new_relerr - last_relerr_);
  last_relerr_ = new_relerr;
  if (last_delta_ < limits_.eps) return StopReason::relerr_delta;
  if (elapsed_s >= limits_.max_time_s) return StopReason::time_limit;
  if (k >= limits_.k_max) return StopReason::iteration_limit;
  return StopReason::none;
}

}  // namespace abpl
