#include "abpl/prox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace abpl {

namespace {

struct Candidate {
  double value;
  std::size_t index;  // row-major
};

double squared_gap(const Matrix& a, const Matrix& u) { return (a - u).squaredNorm(); }

}  // namespace

void SparsityConstraint::validate(std::size_t entries) const {
  if (!nonneg) throw ContractError("only nonnegative l0 constraints are supported");
  if (s < 1 || s > entries) {
    throw ContractError("sparsity budget s=" + std::to_string(s) + " outside [1, " +
                        std::to_string(entries) + "]");
  }
}

Matrix project_nonneg_l0(const Matrix& u, const SparsityConstraint& c) {
  c.validate(static_cast<std::size_t>(u.size()));
  const Eigen::Index cols = u.cols();

  std::vector<Candidate> positive;
  positive.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (u(i, j) > 0.0) positive.push_back({u(i, j), static_cast<std::size_t>(i * cols + j)});

  if (positive.size() > c.s) {
    auto larger = [](const Candidate& a, const Candidate& b) {
      return a.value > b.value || (a.value == b.value && a.index < b.index);
    };
    std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(c.s - 1),
                     positive.end(), larger);
    positive.resize(c.s);
  }

  Matrix out = Matrix::Zero(u.rows(), cols);
  for (const auto& cand : positive) {
    const auto i = static_cast<Eigen::Index>(cand.index) / cols;
    const auto j = static_cast<Eigen::Index>(cand.index) % cols;
    out(i, j) = cand.value;
  }
  return out;
}

ExtendedReal indicator_nonneg_l0(const Matrix& a, const SparsityConstraint& c) {
  if ((a.array() < 0.0).any()) return ExtendedReal::infinity();
  if (nonzero_count(a) > c.s) return ExtendedReal::infinity();
  return ExtendedReal(0.0);
}

Matrix brute_force_prox_oracle(const Matrix& u, const SparsityConstraint& c) {
  const auto n = static_cast<std::size_t>(u.size());
  if (n > 12) throw ContractError("brute-force prox oracle refuses matrices with more than 12 entries");
  c.validate(n);
  const Eigen::Index cols = u.cols();

  Matrix best;
  double best_value = 0.0;
  std::vector<std::size_t> best_support;
  bool have_best = false;

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) support.push_back(k);
    if (support.size() > c.s) continue;

    Matrix a = Matrix::Zero(u.rows(), cols);
    for (std::size_t k : support) {
      const auto i = static_cast<Eigen::Index>(k) / cols;
      const auto j = static_cast<Eigen::Index>(k) % cols;
      a(i, j) = std::max(u(i, j), 0.0);
    }
    const double value = squared_gap(a, u);
    if (!have_best || value < best_value || (value == best_value && support < best_support)) {
      best = std::move(a);
      best_value = value;
      best_support = std::move(support);
      have_best = true;
    }
  }
  return best;
}

Matrix prox_step(const BlockProblem& problem, std::size_t j, const Matrix& anchor,
                 const Matrix& grad, double sigma) {
  problem.check_block_index(j);
  const auto& shape = problem.block_shapes[j];
  if (anchor.rows() != shape.rows || anchor.cols() != shape.cols || grad.rows() != shape.rows ||
      grad.cols() != shape.cols) {
    throw ContractError("prox_step: anchor/gradient shape does not match block " +
                        std::to_string(j + 1));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ContractError("prox_step: step size must be positive and finite");
  if (!grad.allFinite())
    throw NumericError("prox_step: non-finite gradient entries in block " + std::to_string(j + 1));
  return problem.nonsmooth_prox(j, anchor - sigma * grad, sigma);
}

std::size_t nonzero_count(const Matrix& a) {
  return static_cast<std::size_t>((a.array() != 0.0).count());
}

std::vector<bool> support_of(const Matrix& a) {
  std::vector<bool> mask(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      mask[static_cast<std::size_t>(i * a.cols() + j)] = a(i, j) != 0.0;
  return mask;
}

}  // namespace abpl
