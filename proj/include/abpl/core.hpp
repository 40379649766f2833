#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace abpl {

using Matrix = Eigen::MatrixXd;

/// Raised when a caller breaks a documented precondition (shapes, ranges,
/// infeasible start points).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation produces a non-finite value where a finite one
/// is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real number or +infinity. NaN is rejected at construction.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  explicit ExtendedReal(double v);

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  bool is_finite() const { return !is_infinite(); }

  /// The finite value; throws NumericError when infinite.
  double value() const;
  /// The raw double, +inf included.
  double raw() const { return value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
};

/// Ordered list of block variables x_1..x_N, each a dense matrix.
using BlockVars = std::vector<Matrix>;

struct BlockShape {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

/// N-block composite objective J(x) = H(x_1..x_N) + sum_j F_j(x_j).
///
/// H is smooth and couples the blocks; each F_j is proper and lower
/// semicontinuous with a computable prox. Block indices are zero-based.
/// Instances are immutable once built and may be shared between runs.
struct BlockProblem {
  std::vector<BlockShape> block_shapes;

  /// Partial gradient of H w.r.t. block j, evaluated at the full vars.
  std::function<Matrix(const BlockVars&, std::size_t)> smooth_grad;
  std::function<double(const BlockVars&)> smooth_value;
  /// Lipschitz constant of the block-j partial gradient w.r.t. x_j, holding
  /// all other blocks of the given vars fixed.
  std::function<double(const BlockVars&, std::size_t)> lipschitz;
  /// prox_{sigma F_j}(point) for block j.
  std::function<Matrix(std::size_t, const Matrix&, double)> nonsmooth_prox;
  std::function<ExtendedReal(std::size_t, const Matrix&)> nonsmooth_value;

  std::size_t n_blocks() const { return block_shapes.size(); }

  /// Throws ContractError unless vars has exactly the problem's block shapes.
  void check_shapes(const BlockVars& vars) const;
  void check_block_index(std::size_t j) const;
};

/// H(vars) + sum_j F_j(vars_j). Returns +inf without touching H when any F_j
/// is infinite; throws NumericError if H is not finite.
ExtendedReal evaluate_objective(const BlockProblem& problem, const BlockVars& vars);

/// H(vars) only.
double evaluate_smooth(const BlockProblem& problem, const BlockVars& vars);

/// Sum of squared Frobenius norms of the blockwise difference a - b.
double squared_distance(const BlockVars& a, const BlockVars& b);

/// Sum over blocks of the (unsquared) Frobenius norm of a_j - b_j.
double blockwise_distance(const BlockVars& a, const BlockVars& b);

bool all_finite(const BlockVars& vars);

}  // namespace abpl
