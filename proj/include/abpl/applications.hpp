#pragma once

#include <cstddef>
#include <vector>

#include "abpl/core.hpp"
#include "abpl/multilinear.hpp"
#include "abpl/prox.hpp"

namespace abpl {

// ---------------------------------------------------------------------------
// Multi-layer sparse NMF:  min 1/2 ||A - X_1 X_2 ... X_N||_F^2
//                          s.t. X_i >= 0, ||X_i||_0 <= s_i.
// ---------------------------------------------------------------------------

struct MsnmfSpec {
  Matrix data;
  std::vector<BlockShape> block_shapes;
  std::vector<SparsityConstraint> sparsity;
  std::vector<double> gamma;  // one per block, or a single broadcast value

  /// Conformable chain, valid budgets, gamma > 1, nonzero data.
  void validate() const;
};

/// P^T (P X_j Q - A) Q^T with P = X_1..X_{j-1}, Q = X_{j+1}..X_N.
Matrix msnmf_grad_block(const MsnmfSpec& spec, const BlockVars& factors, std::size_t j);

/// ||P^T P||_F * ||Q Q^T||_F; an empty prefix or suffix contributes 1.
double msnmf_lipschitz(const MsnmfSpec& spec, const BlockVars& factors, std::size_t j);

double msnmf_smooth_value(const MsnmfSpec& spec, const BlockVars& factors);

/// ||A - prod X_i||_F / ||A||_F.
double relerr(const MsnmfSpec& spec, const BlockVars& factors);

BlockProblem make_msnmf_problem(const MsnmfSpec& spec);

// ---------------------------------------------------------------------------
// Sparse nonnegative CP decomposition:  min 1/2 ||X - [[A_1..A_n]]||_F^2
//                                       s.t. A_i >= 0, ||A_i||_0 <= s_i.
// ---------------------------------------------------------------------------

struct SntdSpec {
  DenseTensor data;
  Eigen::Index rank = 1;
  std::vector<SparsityConstraint> sparsity;  // one per mode
  std::vector<double> gamma;

  void validate() const;
  std::vector<BlockShape> block_shapes() const;
};

/// Mode unfoldings of the data, computed once.
std::vector<Matrix> data_unfoldings(const DenseTensor& data);

/// A_i (B_i^T B_i) - X_(i) B_i with B_i the Khatri-Rao chain skipping mode i.
Matrix sntd_grad_block(const SntdSpec& spec, const BlockVars& factors, std::size_t i,
                       const std::vector<Matrix>& unfoldings);

/// ||B_i^T B_i||_F.
double sntd_lipschitz(const SntdSpec& spec, const BlockVars& factors, std::size_t i);

double sntd_smooth_value(const SntdSpec& spec, const BlockVars& factors,
                         const std::vector<Matrix>& unfoldings);

/// ||X - [[A_1..A_n]]||_F / ||X||_F.
double relerr(const SntdSpec& spec, const BlockVars& factors);

BlockProblem make_sntd_problem(const SntdSpec& spec);

/// s_i = floor(fraction * entries), at least 1.
SparsityConstraint sparsity_from_fraction(double fraction, std::size_t entries);

}  // namespace abpl
