#pragma once

#include <cstddef>
#include <string_view>

namespace abpl {

enum class StopReason { none, relerr_delta, time_limit, iteration_limit };

std::string_view to_string(StopReason r);

struct StopLimits {
  double eps = 1e-4;          // threshold on |RelErr^{k+1} - RelErr^k|
  double max_time_s = 3600.0;
  std::size_t k_max = 1000;
};

/// Tracks the previous RelErr and applies the stopping rule:
/// stop when |RelErr^{k+1} - RelErr^k| < eps, elapsed >= max_time_s, or
/// k >= k_max.
class StopState {
 public:
  StopState(double initial_relerr, StopLimits limits);

  /// Feeds the RelErr after iteration k (1-based). The delta test compares it
  /// against the previously fed value (the initial one on the first call).
  StopReason check(double new_relerr, double elapsed_s, std::size_t k);

  double last_relerr() const { return last_relerr_; }
  double last_delta() const { return last_delta_; }
  const StopLimits& limits() const { return limits_; }

 private:
  double last_relerr_;
  double last_delta_ = 0.0;
  StopLimits limits_;
};

}  // namespace abpl
