#include "abpl/applications.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace abpl {

namespace {

std::vector<Matrix> slice(const BlockVars& factors, std::size_t begin, std::size_t end) {
  return {factors.begin() + static_cast<std::ptrdiff_t>(begin),
          factors.begin() + static_cast<std::ptrdiff_t>(end)};
}

void check_factors(const MsnmfSpec& spec, const BlockVars& factors, std::size_t j) {
  if (factors.size() != spec.block_shapes.size())
    throw ContractError("msnmf: expected " + std::to_string(spec.block_shapes.size()) + " factors");
  if (j >= factors.size()) throw ContractError("msnmf: block index out of range");
}

}  // namespace

SparsityConstraint sparsity_from_fraction(double fraction, std::size_t entries) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ContractError("sparsity fraction must lie in (0, 1]");
  const auto s = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(entries)));
  return SparsityConstraint{s < 1 ? 1 : s, true};
}

void MsnmfSpec::validate() const {
  const std::size_t n = block_shapes.size();
  if (n == 0) throw ContractError("msnmf: need at least one factor");
  if (block_shapes.front().rows != data.rows())
    throw ContractError("msnmf: rows of X_1 must equal rows of A");
  if (block_shapes.back().cols != data.cols())
    throw ContractError("msnmf: cols of X_N must equal cols of A");
  for (std::size_t i = 0; i < n; ++i) {
    if (block_shapes[i].rows < 1 || block_shapes[i].cols < 1)
      throw ContractError("msnmf: factor shapes must be positive");
    if (i + 1 < n && block_shapes[i].cols != block_shapes[i + 1].rows)
      throw ContractError("msnmf: factor chain is not conformable at block " + std::to_string(i + 1));
  }
  if (sparsity.size() != n) throw ContractError("msnmf: need one sparsity budget per factor");
  for (std::size_t i = 0; i < n; ++i)
    sparsity[i].validate(static_cast<std::size_t>(block_shapes[i].rows * block_shapes[i].cols));
  if (gamma.size() != 1 && gamma.size() != n) throw ContractError("msnmf: gamma needs 1 or N entries");
  for (double g : gamma)
    if (!(g > 1.0)) throw ContractError("msnmf: gamma must exceed 1");
  if (!data.allFinite()) throw ContractError("msnmf: data has non-finite entries");
  if (data.norm() == 0.0) throw ContractError("msnmf: data matrix is identically zero");
}

Matrix msnmf_grad_block(const MsnmfSpec& spec, const BlockVars& factors, std::size_t j) {
  check_factors(spec, factors, j);
  const Matrix p = chain_product(slice(factors, 0, j), spec.data.rows());
  const Matrix q = chain_product(slice(factors, j + 1, factors.size()), spec.data.cols());
  const Matrix residual = p * factors[j] * q - spec.data;
  return p.transpose() * residual * q.transpose();
}

double msnmf_lipschitz(const MsnmfSpec& spec, const BlockVars& factors, std::size_t j) {
  check_factors(spec, factors, j);
  double l = 1.0;
  if (j > 0) {
    const Matrix p = chain_product(slice(factors, 0, j), spec.data.rows());
    l *= (p.transpose() * p).norm();
  }
  if (j + 1 < factors.size()) {
    const Matrix q = chain_product(slice(factors, j + 1, factors.size()), spec.data.cols());
    l *= (q * q.transpose()).norm();
  }
  return l;
}

double msnmf_smooth_value(const MsnmfSpec& spec, const BlockVars& factors) {
  const Matrix model = chain_product(factors, spec.data.rows());
  return 0.5 * (spec.data - model).squaredNorm();
}

double relerr(const MsnmfSpec& spec, const BlockVars& factors) {
  const double denom = spec.data.norm();
  if (denom == 0.0) throw ContractError("relerr: data has zero norm");
  return (spec.data - chain_product(factors, spec.data.rows())).norm() / denom;
}

BlockProblem make_msnmf_problem(const MsnmfSpec& spec) {
  spec.validate();
  auto s = std::make_shared<const MsnmfSpec>(spec);

  BlockProblem problem;
  problem.block_shapes = s->block_shapes;
  problem.smooth_grad = [s](const BlockVars& v, std::size_t j) { return msnmf_grad_block(*s, v, j); };
  problem.smooth_value = [s](const BlockVars& v) { return msnmf_smooth_value(*s, v); };
  problem.lipschitz = [s](const BlockVars& v, std::size_t j) { return msnmf_lipschitz(*s, v, j); };
  problem.nonsmooth_prox = [s](std::size_t j, const Matrix& point, double) {
    return project_nonneg_l0(point, s->sparsity[j]);
  };
  problem.nonsmooth_value = [s](std::size_t j, const Matrix& x) {
    return indicator_nonneg_l0(x, s->sparsity[j]);
  };
  return problem;
}

}  // namespace abpl
