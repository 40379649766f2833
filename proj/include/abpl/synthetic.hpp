#pragma once

#include <cstdint>
#include <vector>

#include "abpl/core.hpp"
#include "abpl/multilinear.hpp"
#include "abpl/random.hpp"

namespace abpl {

/// rows x cols matrix with floor(density * entries) (at least one) nonzeros
/// on a uniformly drawn support, values uniform in (0, 1].
Matrix random_sparse_matrix(Eigen::Index rows, Eigen::Index cols, double density, Rng& rng);

/// One random sparse matrix per shape, drawn in order.
BlockVars random_sparse_blocks(const std::vector<BlockShape>& shapes, double density, Rng& rng);

struct MsnmfSynthetic {
  Matrix data;      // product of the ground-truth factors
  BlockVars truth;
};

struct SntdSynthetic {
  DenseTensor data;  // Kruskal reconstruction of the ground-truth factors
  BlockVars truth;
};

/// Factors with the given chain shapes; fully determined by seed.
/// Draws are repeated from the same stream until the product is nonzero.
MsnmfSynthetic generate_msnmf(const std::vector<BlockShape>& chain, double density, std::uint64_t seed);

/// Factors d_i x rank; fully determined by seed.
SntdSynthetic generate_sntd(const std::vector<std::size_t>& dims, Eigen::Index rank, double density,
                            std::uint64_t seed);

}  // namespace abpl
