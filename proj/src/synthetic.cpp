#include "abpl/synthetic.hpp"

#include <cmath>
#include <numeric>

namespace abpl {

namespace {
// Sparse factors can multiply to zero; such draws are discarded.
constexpr int kMaxDraws = 1000;
}  // namespace

Matrix random_sparse_matrix(Eigen::Index rows, Eigen::Index cols, double density, Rng& rng) {
  if (rows < 1 || cols < 1) throw ContractError("random_sparse_matrix: shape must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw ContractError("density must lie in (0, 1]");
  const auto entries = static_cast<std::size_t>(rows * cols);
  auto count = static_cast<std::size_t>(std::floor(density * static_cast<double>(entries)));
  if (count < 1) count = 1;

  // Partial Fisher-Yates over row-major indices picks the support.
  std::vector<std::size_t> idx(entries);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(entries - i));
    std::swap(idx[i], idx[j]);
  }
  Matrix m = Matrix::Zero(rows, cols);
  for (std::size_t i = 0; i < count; ++i) {
    const auto flat = static_cast<Eigen::Index>(idx[i]);
    m(flat / cols, flat % cols) = rng.unit_open_closed();
  }
  return m;
}

BlockVars random_sparse_blocks(const std::vector<BlockShape>& shapes, double density, Rng& rng) {
  BlockVars out;
  for (const auto& s : shapes) out.push_back(random_sparse_matrix(s.rows, s.cols, density, rng));
  return out;
}

MsnmfSynthetic generate_msnmf(const std::vector<BlockShape>& chain, double density, std::uint64_t seed) {
  if (chain.empty()) throw ContractError("generate_msnmf: empty factor chain");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (chain[i].cols != chain[i + 1].rows)
      throw ContractError("generate_msnmf: factor chain is not conformable");
  Rng rng(seed);
  MsnmfSynthetic out;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    out.truth = random_sparse_blocks(chain, density, rng);
    out.data = chain_product(out.truth, chain.front().rows);
    if (out.data.squaredNorm() > 0.0) return out;
  }
  throw ContractError("generate_msnmf: density too low to produce a nonzero product");
}

SntdSynthetic generate_sntd(const std::vector<std::size_t>& dims, Eigen::Index rank, double density,
                            std::uint64_t seed) {
  if (dims.empty()) throw ContractError("generate_sntd: need at least one mode");
  if (rank < 1) throw ContractError("generate_sntd: rank must be positive");
  std::vector<BlockShape> shapes;
  for (auto d : dims) {
    if (d == 0) throw ContractError("generate_sntd: dimensions must be positive");
    shapes.push_back({static_cast<Eigen::Index>(d), rank});
  }
  Rng rng(seed);
  SntdSynthetic out;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    out.truth = random_sparse_blocks(shapes, density, rng);
    out.data = kruskal_reconstruct(FactorSet{out.truth});
    if (out.data.frobenius_norm() > 0.0) return out;
  }
  throw ContractError("generate_sntd: density too low to produce a nonzero tensor");
}

}  // namespace abpl
