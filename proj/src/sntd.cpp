#include "abpl/applications.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace abpl {

void SntdSpec::validate() const {
  const std::size_t n = data.order();
  if (n == 0) throw ContractError("sntd: data tensor is empty");
  if (rank < 1) throw ContractError("sntd: rank must be at least 1");
  if (sparsity.size() != n) throw ContractError("sntd: need one sparsity budget per mode");
  for (std::size_t i = 0; i < n; ++i)
    sparsity[i].validate(data.dims()[i] * static_cast<std::size_t>(rank));
  if (gamma.size() != 1 && gamma.size() != n) throw ContractError("sntd: gamma needs 1 or n entries");
  for (double g : gamma)
    if (!(g > 1.0)) throw ContractError("sntd: gamma must exceed 1");
  for (double v : data.data())
    if (!std::isfinite(v)) throw ContractError("sntd: data has non-finite entries");
  if (data.frobenius_norm() == 0.0) throw ContractError("sntd: data tensor is identically zero");
}

std::vector<BlockShape> SntdSpec::block_shapes() const {
  std::vector<BlockShape> shapes;
  for (auto d : data.dims()) shapes.push_back({static_cast<Eigen::Index>(d), rank});
  return shapes;
}

std::vector<Matrix> data_unfoldings(const DenseTensor& data) {
  std::vector<Matrix> out;
  for (std::size_t m = 0; m < data.order(); ++m) out.push_back(mode_n_unfold(data, m));
  return out;
}

Matrix sntd_grad_block(const SntdSpec& spec, const BlockVars& factors, std::size_t i,
                       const std::vector<Matrix>& unfoldings) {
  if (factors.size() != spec.data.order() || unfoldings.size() != factors.size())
    throw ContractError("sntd: factor/unfolding count does not match tensor order");
  if (i >= factors.size()) throw ContractError("sntd: mode index out of range");
  const Matrix b = khatri_rao_chain(factors, i);
  if (unfoldings[i].cols() != b.rows()) throw ContractError("sntd: unfolding shape mismatch");
  return factors[i] * (b.transpose() * b) - unfoldings[i] * b;
}

double sntd_lipschitz(const SntdSpec& spec, const BlockVars& factors, std::size_t i) {
  if (factors.size() != spec.data.order()) throw ContractError("sntd: wrong factor count");
  if (i >= factors.size()) throw ContractError("sntd: mode index out of range");
  const Matrix b = khatri_rao_chain(factors, i);
  return (b.transpose() * b).norm();
}

double sntd_smooth_value(const SntdSpec& spec, const BlockVars& factors,
                         const std::vector<Matrix>& unfoldings) {
  if (factors.size() != spec.data.order()) throw ContractError("sntd: wrong factor count");
  const Matrix b = khatri_rao_chain(factors, 0);
  return 0.5 * (unfoldings[0] - factors[0] * b.transpose()).squaredNorm();
}

double relerr(const SntdSpec& spec, const BlockVars& factors) {
  const double denom = spec.data.frobenius_norm();
  if (denom == 0.0) throw ContractError("relerr: data has zero norm");
  const DenseTensor model = kruskal_reconstruct(FactorSet{factors});
  if (model.dims() != spec.data.dims()) throw ContractError("relerr: factor shapes do not match data");
  double acc = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const double d = spec.data.data()[k] - model.data()[k];
    acc += d * d;
  }
  return std::sqrt(acc) / denom;
}

BlockProblem make_sntd_problem(const SntdSpec& spec) {
  spec.validate();
  struct State {
    SntdSpec spec;
    std::vector<Matrix> unfoldings;
  };
  auto s = std::make_shared<const State>(State{spec, data_unfoldings(spec.data)});

  BlockProblem problem;
  problem.block_shapes = s->spec.block_shapes();
  problem.smooth_grad = [s](const BlockVars& v, std::size_t i) {
    return sntd_grad_block(s->spec, v, i, s->unfoldings);
  };
  problem.smooth_value = [s](const BlockVars& v) { return sntd_smooth_value(s->spec, v, s->unfoldings); };
  problem.lipschitz = [s](const BlockVars& v, std::size_t i) { return sntd_lipschitz(s->spec, v, i); };
  problem.nonsmooth_prox = [s](std::size_t i, const Matrix& point, double) {
    return project_nonneg_l0(point, s->spec.sparsity[i]);
  };
  problem.nonsmooth_value = [s](std::size_t i, const Matrix& x) {
    return indicator_nonneg_l0(x, s->spec.sparsity[i]);
  };
  return problem;
}

}  // namespace abpl
