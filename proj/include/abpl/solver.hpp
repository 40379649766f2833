#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "abpl/core.hpp"
#include "abpl/random.hpp"
#include "abpl/stopping.hpp"

namespace abpl {

enum class MomentumSchedule { adaptive, fista, none };
enum class OrderMode { cyclic, random };

enum class Branch {
  accept_extrapolated,
  keep_extrapolated_after_restart,
  take_restart,
  no_momentum,
};

std::string_view to_string(MomentumSchedule s);
std::string_view to_string(OrderMode m);
std::string_view to_string(Branch b);
MomentumSchedule parse_schedule(std::string_view s);
OrderMode parse_order_mode(std::string_view s);
Branch parse_branch(std::string_view s);

struct SolverConfig {
  MomentumSchedule schedule = MomentumSchedule::adaptive;
  double t = 1.1;
  double beta_1 = 0.6;
  double beta_max = 0.9999;
  /// Per-block step safety factor; sigma_j = 1 / (gamma_j * L_j). A single
  /// entry is broadcast to every block.
  std::vector<double> gamma{1.5};
  OrderMode order_mode = OrderMode::cyclic;
  std::size_t k_max = 1000;
  double eps = 1e-4;
  double max_time_s = 3600.0;
  std::uint64_t seed = 0;
  double lipschitz_floor = 1e-12;

  /// Throws ContractError if any invariant is broken for an n-block problem.
  void validate(std::size_t n_blocks) const;
  double gamma_for(std::size_t j) const { return gamma.size() == 1 ? gamma[0] : gamma[j]; }
};

struct MomentumState {
  double beta_k = 0.0;
  double t_k = 1.0;
};

struct IterationRecord {
  std::size_t k = 0;
  double elapsed_s = 0.0;
  double objective = 0.0;  // J at the accepted x^{k+1}
  double relerr = 0.0;
  double beta = 0.0;       // beta_k used for the extrapolation
  Branch branch = Branch::no_momentum;
  std::vector<std::size_t> order;  // zero-based block indices
  int sweep_count = 1;
  /// Sum over blocks of ||x^{k+1}_j - anchor_j||_F, where the anchor is the
  /// point the accepted sweep started from.
  double residual_norm = 0.0;
  /// Some block of x^k has a different nonzero pattern than in x^{k-1}.
  bool support_changed = false;
};

/// Output of one Gauss-Seidel pass, with everything needed to audit it.
struct SweepResult {
  BlockVars anchor;                // y the sweep started from
  BlockVars z;                     // updated blocks
  std::vector<std::size_t> order;  // visit order
  std::vector<double> sigmas;      // indexed by block
  std::vector<double> lipschitz;   // floored L_j, indexed by block
};

/// Everything the solver knows about one outer iteration, handed to the
/// optional observer. References are valid only during the callback.
struct IterationDetail {
  const IterationRecord& record;
  const BlockVars& x_prev;  // x^{k-1}
  const BlockVars& x;       // x^k
  const BlockVars& y;       // extrapolated point
  const BlockVars& x_next;  // accepted x^{k+1}
  const SweepResult& first;
  const SweepResult* restart;  // null unless the restart sweep ran
  ExtendedReal j_x;
  ExtendedReal j_y;
  ExtendedReal j_first;
  std::optional<ExtendedReal> j_restart;
};

using IterationObserver = std::function<void(const IterationDetail&)>;
using RelErrFn = std::function<double(const BlockVars&)>;

struct RunResult {
  BlockVars final_vars;
  std::vector<IterationRecord> trace;
  double initial_objective = 0.0;
  double initial_relerr = 0.0;
  StopReason stop_reason = StopReason::none;
};

/// y = x_k + beta (x_k - x_km1), blockwise. beta == 0 returns x_k unchanged.
BlockVars extrapolate(const BlockVars& x_k, const BlockVars& x_km1, double beta);

/// Identity order for cyclic mode, a Fisher-Yates shuffle otherwise.
std::vector<std::size_t> choose_order(OrderMode mode, std::size_t n, Rng& rng);

/// One Gauss-Seidel pass of prox-linear updates starting from y.
SweepResult block_sweep(const BlockProblem& problem, const BlockVars& y,
                        const std::vector<std::size_t>& order, const SolverConfig& config);

MomentumState update_momentum_adaptive(MomentumState state, bool grew, const SolverConfig& config);

/// FISTA counter update; the resulting beta is clamped to [0, beta_max].
MomentumState update_momentum_fista(MomentumState state, const SolverConfig& config);

/// Per-block norms ||p_j||_F of the subgradient residual
///   p_j = grad_j H(after update j) - grad_j H(before update j) + (y_j - x_new_j) / sigma_j,
/// where "before/after" are the sweep's working variables at the moment block
/// j was visited. Throws ContractError when sigmas were not produced by a
/// sweep from y in the given order.
std::vector<double> subgradient_residual(const BlockProblem& problem, const BlockVars& x_new,
                                         const BlockVars& y, const std::vector<double>& sigmas,
                                         const std::vector<std::size_t>& order,
                                         const SolverConfig& config);
std::vector<double> subgradient_residual(const BlockProblem& problem, const SweepResult& sweep,
                                         const SolverConfig& config);

/// Accelerated block proximal linear method with adaptive momentum and
/// restart. x0 must lie in dom J.
RunResult abpl_plus_run(const BlockProblem& problem, const BlockVars& x0, const SolverConfig& config,
                        const RelErrFn& relerr, const IterationObserver& observer = {});

}  // namespace abpl
