#include "abpl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "abpl/prox.hpp"

namespace abpl {

std::string_view to_string(MomentumSchedule s) {
  switch (s) {
    case MomentumSchedule::adaptive: return "adaptive";
    case MomentumSchedule::fista: return "fista";
    case MomentumSchedule::none: return "none";
  }
  return "unknown";
}

std::string_view to_string(OrderMode m) {
  return m == OrderMode::cyclic ? "cyclic" : "random";
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::accept_extrapolated: return "accept_extrapolated";
    case Branch::keep_extrapolated_after_restart: return "keep_extrapolated_after_restart";
    case Branch::take_restart: return "take_restart";
    case Branch::no_momentum: return "no_momentum";
  }
  return "unknown";
}

MomentumSchedule parse_schedule(std::string_view s) {
  if (s == "adaptive") return MomentumSchedule::adaptive;
  if (s == "fista") return MomentumSchedule::fista;
  if (s == "none") return MomentumSchedule::none;
  throw ContractError("unknown momentum schedule '" + std::string(s) + "'");
}

OrderMode parse_order_mode(std::string_view s) {
  if (s == "cyclic") return OrderMode::cyclic;
  if (s == "random") return OrderMode::random;
  throw ContractError("unknown order mode '" + std::string(s) + "'");
}

Branch parse_branch(std::string_view s) {
  for (Branch b : {Branch::accept_extrapolated, Branch::keep_extrapolated_after_restart,
                   Branch::take_restart, Branch::no_momentum}) {
    if (s == to_string(b)) return b;
  }
  throw ContractError("unknown branch '" + std::string(s) + "'");
}

void SolverConfig::validate(std::size_t n_blocks) const {
  if (!(t > 1.0)) throw ContractError("solver: t must exceed 1");
  if (!(beta_max >= 0.0 && beta_max < 1.0)) throw ContractError("solver: beta_max must lie in [0, 1)");
  if (!(beta_1 >= 0.0 && beta_1 <= beta_max))
    throw ContractError("solver: beta_1 must lie in [0, beta_max]");
  if (schedule == MomentumSchedule::none && beta_1 != 0.0)
    throw ContractError("solver: schedule 'none' requires beta_1 = 0");
  if (gamma.size() != 1 && gamma.size() != n_blocks)
    throw ContractError("solver: gamma needs one entry or one per block");
  for (double g : gamma)
    if (!(g > 1.0)) throw ContractError("solver: every gamma_j must exceed 1");
  if (k_max < 1) throw ContractError("solver: k_max must be positive");
  if (!(eps >= 0.0)) throw ContractError("solver: eps must be nonnegative");
  if (!(max_time_s > 0.0)) throw ContractError("solver: max_time_s must be positive");
  if (!(lipschitz_floor > 0.0)) throw ContractError("solver: lipschitz_floor must be positive");
}

BlockVars extrapolate(const BlockVars& x_k, const BlockVars& x_km1, double beta) {
  if (x_k.size() != x_km1.size()) throw ContractError("extrapolate: block count mismatch");
  if (!(beta >= 0.0 && beta < 1.0)) throw ContractError("extrapolate: beta must lie in [0, 1)");
  if (beta == 0.0) return x_k;
  BlockVars y(x_k.size());
  for (std::size_t i = 0; i < x_k.size(); ++i) {
    if (x_k[i].rows() != x_km1[i].rows() || x_k[i].cols() != x_km1[i].cols())
      throw ContractError("extrapolate: block shape mismatch");
    y[i] = x_k[i] + beta * (x_k[i] - x_km1[i]);
  }
  return y;
}

std::vector<std::size_t> choose_order(OrderMode mode, std::size_t n, Rng& rng) {
  if (n < 1) throw ContractError("choose_order: need at least one block");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (mode == OrderMode::random) {
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(order[i], order[j]);
    }
  }
  return order;
}

namespace {

void check_permutation(const std::vector<std::size_t>& order, std::size_t n) {
  if (order.size() != n) throw ContractError("block order has the wrong length");
  std::vector<bool> seen(n, false);
  for (std::size_t j : order) {
    if (j >= n || seen[j]) throw ContractError("block order is not a permutation");
    seen[j] = true;
  }
}

double floored_lipschitz(const BlockProblem& problem, const BlockVars& g, std::size_t j,
                         const SolverConfig& config) {
  const double l = problem.lipschitz(g, j);
  if (!std::isfinite(l) || l < 0.0)
    throw NumericError("non-finite Lipschitz estimate for block " + std::to_string(j + 1));
  return std::max(l, config.lipschitz_floor);
}

bool supports_differ(const BlockVars& a, const BlockVars& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (support_of(a[j]) != support_of(b[j])) return true;
  return false;
}

}  // namespace

SweepResult block_sweep(const BlockProblem& problem, const BlockVars& y,
                        const std::vector<std::size_t>& order, const SolverConfig& config) {
  problem.check_shapes(y);
  const std::size_t n = problem.n_blocks();
  check_permutation(order, n);

  SweepResult out;
  out.anchor = y;
  out.order = order;
  out.sigmas.assign(n, 0.0);
  out.lipschitz.assign(n, 0.0);

  BlockVars g = y;
  for (std::size_t j : order) {
    // Slot j of g still holds y_j here.
    const double l = floored_lipschitz(problem, g, j, config);
    const double sigma = 1.0 / (config.gamma_for(j) * l);
    Matrix grad = problem.smooth_grad(g, j);
    if (!grad.allFinite())
      throw NumericError("non-finite gradient in block " + std::to_string(j + 1));
    g[j] = prox_step(problem, j, y[j], grad, sigma);
    out.sigmas[j] = sigma;
    out.lipschitz[j] = l;
  }
  out.z = std::move(g);
  return out;
}

MomentumState update_momentum_adaptive(MomentumState state, bool grew, const SolverConfig& config) {
  if (grew)
    state.beta_k = std::min(config.beta_max, config.t * state.beta_k);
  else
    state.beta_k = state.beta_k / config.t;
  return state;
}

MomentumState update_momentum_fista(MomentumState state, const SolverConfig& config) {
  if (!(state.t_k >= 1.0)) throw ContractError("fista momentum: t_k must be at least 1");
  const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * state.t_k * state.t_k)) / 2.0;
  const double beta = (state.t_k - 1.0) / t_next;
  state.beta_k = std::clamp(beta, 0.0, config.beta_max);
  state.t_k = t_next;
  return state;
}

std::vector<double> subgradient_residual(const BlockProblem& problem, const BlockVars& x_new,
                                         const BlockVars& y, const std::vector<double>& sigmas,
                                         const std::vector<std::size_t>& order,
                                         const SolverConfig& config) {
  problem.check_shapes(x_new);
  problem.check_shapes(y);
  const std::size_t n = problem.n_blocks();
  check_permutation(order, n);
  if (sigmas.size() != n) throw ContractError("subgradient_residual: need one sigma per block");

  std::vector<double> norms(n, 0.0);
  BlockVars g = y;
  for (std::size_t j : order) {
    const double l = floored_lipschitz(problem, g, j, config);
    const double expected_sigma = 1.0 / (config.gamma_for(j) * l);
    if (expected_sigma != sigmas[j]) {
      throw ContractError("subgradient_residual: sigma for block " + std::to_string(j + 1) +
                          " was not produced by a sweep from this point and order");
    }
    const Matrix grad_before = problem.smooth_grad(g, j);
    g[j] = x_new[j];
    const Matrix grad_after = problem.smooth_grad(g, j);
    const Matrix p = grad_after - grad_before + (y[j] - x_new[j]) / sigmas[j];
    norms[j] = p.norm();
  }
  return norms;
}

std::vector<double> subgradient_residual(const BlockProblem& problem, const SweepResult& sweep,
                                         const SolverConfig& config) {
  return subgradient_residual(problem, sweep.z, sweep.anchor, sweep.sigmas, sweep.order, config);
}

RunResult abpl_plus_run(const BlockProblem& problem, const BlockVars& x0, const SolverConfig& config,
                        const RelErrFn& relerr, const IterationObserver& observer) {
  const std::size_t n = problem.n_blocks();
  config.validate(n);
  problem.check_shapes(x0);
  if (!all_finite(x0)) throw ContractError("start point has non-finite entries");
  if (!relerr) throw ContractError("abpl_plus_run: a RelErr evaluator is required");

  ExtendedReal j_x = evaluate_objective(problem, x0);
  if (j_x.is_infinite()) throw ContractError("start point is outside the domain of the objective");

  RunResult result;
  result.initial_objective = j_x.value();
  result.initial_relerr = relerr(x0);

  StopState stop(result.initial_relerr, StopLimits{config.eps, config.max_time_s, config.k_max});
  Rng rng(config.seed);
  MomentumState momentum{config.schedule == MomentumSchedule::none ? 0.0 : config.beta_1, 1.0};

  BlockVars x_prev = x0;
  BlockVars x = x0;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t k = 1;; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.beta = momentum.beta_k;
    rec.order = choose_order(config.order_mode, n, rng);
    rec.support_changed = supports_differ(x, x_prev);

    try {
      BlockVars y = extrapolate(x, x_prev, momentum.beta_k);
      SweepResult first = block_sweep(problem, y, rec.order, config);
      ExtendedReal j_first = evaluate_objective(problem, first.z);

      std::optional<SweepResult> restart;
      std::optional<ExtendedReal> j_restart;
      ExtendedReal j_y = j_x;
      bool grew = true;
      bool take_restart = false;

      if (config.schedule == MomentumSchedule::none || momentum.beta_k == 0.0) {
        rec.branch = Branch::no_momentum;
      } else {
        j_y = evaluate_objective(problem, y);
        if (j_y <= j_x) {
          rec.branch = Branch::accept_extrapolated;
        } else {
          restart = block_sweep(problem, x, rec.order, config);
          j_restart = evaluate_objective(problem, restart->z);
          rec.sweep_count = 2;
          if (*j_restart > j_first) {
            rec.branch = Branch::keep_extrapolated_after_restart;
          } else {
            rec.branch = Branch::take_restart;
            take_restart = true;
            grew = false;
          }
        }
      }

      const SweepResult& accepted = take_restart ? *restart : first;
      const ExtendedReal j_next = take_restart ? *j_restart : j_first;
      if (j_next.is_infinite())
        throw NumericError("accepted iterate left the domain of the objective");

      rec.objective = j_next.value();
      rec.residual_norm = blockwise_distance(accepted.z, accepted.anchor);
      rec.relerr = relerr(accepted.z);
      rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      if (observer) {
        observer(IterationDetail{rec, x_prev, x, y, accepted.z, first,
                                 restart ? &*restart : nullptr, j_x, j_y, j_first, j_restart});
      }

      switch (config.schedule) {
        case MomentumSchedule::adaptive:
          momentum = update_momentum_adaptive(momentum, grew, config);
          break;
        case MomentumSchedule::fista:
          momentum = update_momentum_fista(momentum, config);
          break;
        case MomentumSchedule::none:
          break;
      }

      x_prev = std::move(x);
      x = accepted.z;
      j_x = j_next;
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(k) + ": " + e.what());
    }

    const StopReason reason = stop.check(rec.relerr, rec.elapsed_s, k);
    result.trace.push_back(std::move(rec));
    if (reason != StopReason::none) {
      result.stop_reason = reason;
      break;
    }
  }

  result.final_vars = std::move(x);
  return result;
}

}  // namespace abpl
