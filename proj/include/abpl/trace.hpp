#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "abpl/solver.hpp"

namespace abpl {

/// Exact header of the trace CSV.
inline constexpr const char* kTraceHeader = "iter,elapsed_s,objective,relerr,beta,branch,sweeps,residual,order";

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);

/// Parses a trace CSV back. support_changed is not part of the file and is
/// left false.
std::vector<IterationRecord> read_trace_csv(std::istream& in, const std::string& source = "<stream>");

/// 1-based, dash-joined block order, e.g. "2-1-3".
std::string format_order(const std::vector<std::size_t>& order);

/// Branch counts over a trace, plus how often the support of x^k differed
/// from x^{k-1} (only known for in-process traces).
struct AcceptanceStats {
  std::size_t iterations = 0;
  std::array<std::size_t, 4> counts{};  // indexed by Branch
  std::optional<std::size_t> support_changes;
  /// Iterations that accepted the extrapolated point although supports moved.
  std::optional<std::size_t> accepts_with_support_change;

  std::size_t count(Branch b) const { return counts[static_cast<std::size_t>(b)]; }
  double fraction(Branch b) const;
};

/// Requires a nonempty trace. with_supports selects whether the
/// support_changed column of the records is meaningful.
AcceptanceStats acceptance_stats(const std::vector<IterationRecord>& trace, bool with_supports = true);

void print_acceptance_stats(std::ostream& out, const AcceptanceStats& stats);

}  // namespace abpl
