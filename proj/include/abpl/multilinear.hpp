#pragma once

#include <cstddef>
#include <vector>

#include "abpl/core.hpp"

namespace abpl {

/// Dense n-way array stored first-index-fastest.
class DenseTensor {
 public:
  DenseTensor() = default;
  /// Zero tensor with the given dimensions.
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, std::vector<double> data);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Flat offset of a multi-index.
  std::size_t offset(const std::vector<std::size_t>& index) const;
  double operator()(const std::vector<std::size_t>& index) const { return data_[offset(index)]; }
  double& operator()(const std::vector<std::size_t>& index) { return data_[offset(index)]; }

  double frobenius_norm() const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
};

/// CP factor matrices; factor i has shape d_i x R.
struct FactorSet {
  std::vector<Matrix> factors;

  Eigen::Index rank() const { return factors.empty() ? 0 : factors.front().cols(); }
  void validate() const;
};

/// Column-wise Kronecker product; row index of a varies slowest.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// Mode-n matricization (zero-based mode). Columns linearize the remaining
/// indices with smaller modes varying fastest.
Matrix mode_n_unfold(const DenseTensor& x, std::size_t mode);

/// Inverse of mode_n_unfold.
DenseTensor mode_n_refold(const Matrix& unfolded, const std::vector<std::size_t>& dims, std::size_t mode);

/// Sum over r of the outer product of the r-th factor columns.
DenseTensor kruskal_reconstruct(const FactorSet& f);

/// A_n (.) ... (.) A_{skip+1} (.) A_{skip-1} (.) ... (.) A_1, so that
/// mode_n_unfold(kruskal_reconstruct(f), skip) = A_skip * chain^T.
/// With a single factor the chain is a 1 x R row of ones.
Matrix khatri_rao_chain(const FactorSet& f, std::size_t skip);
Matrix khatri_rao_chain(const std::vector<Matrix>& factors, std::size_t skip);

/// Left-to-right product; an empty list yields the identity of size
/// identity_size.
Matrix chain_product(const std::vector<Matrix>& ms, Eigen::Index identity_size);

}  // namespace abpl
