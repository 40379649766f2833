#pragma once

#include <cstddef>
#include <vector>

#include "abpl/core.hpp"

namespace abpl {

/// Nonnegativity plus an l0 budget: {A >= 0, ||A||_0 <= s}.
struct SparsityConstraint {
  std::size_t s = 1;
  bool nonneg = true;

  /// Throws ContractError unless 1 <= s <= entries and nonneg is set.
  void validate(std::size_t entries) const;
};

/// Euclidean projection onto {A >= 0, ||A||_0 <= s}: clip negatives, then keep
/// the s largest positive entries. Ties go to the smaller row-major linear
/// index; zeros are never kept.
Matrix project_nonneg_l0(const Matrix& u, const SparsityConstraint& c);

/// Indicator of {A >= 0, ||A||_0 <= s}: 0 inside, +inf outside.
ExtendedReal indicator_nonneg_l0(const Matrix& a, const SparsityConstraint& c);

/// Exhaustive search over all supports of size <= s. Only for matrices with
/// at most 12 entries; ties resolve to the lexicographically smallest support
/// (row-major indices).
Matrix brute_force_prox_oracle(const Matrix& u, const SparsityConstraint& c);

/// One prox-linear step on block j: prox_{sigma F_j}(anchor - sigma * grad).
Matrix prox_step(const BlockProblem& problem, std::size_t j, const Matrix& anchor,
                 const Matrix& grad, double sigma);

std::size_t nonzero_count(const Matrix& a);

/// Row-major nonzero mask of a.
std::vector<bool> support_of(const Matrix& a);

}  // namespace abpl
