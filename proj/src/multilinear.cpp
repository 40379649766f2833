#include "abpl/multilinear.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace abpl {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw ContractError("tensor needs at least one dimension");
  for (auto d : dims)
    if (d == 0) throw ContractError("tensor dimensions must be positive");
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_.assign(product(dims_), 0.0);
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != product(dims_)) {
    throw ContractError("tensor data length " + std::to_string(data_.size()) +
                        " does not match dimension product " + std::to_string(product(dims_)));
  }
}

std::size_t DenseTensor::offset(const std::vector<std::size_t>& index) const {
  if (index.size() != dims_.size()) throw ContractError("tensor index has wrong arity");
  std::size_t off = 0;
  std::size_t stride = 1;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (index[m] >= dims_[m]) throw ContractError("tensor index out of range");
    off += index[m] * stride;
    stride *= dims_[m];
  }
  return off;
}

double DenseTensor::frobenius_norm() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

void FactorSet::validate() const {
  if (factors.empty()) throw ContractError("factor set is empty");
  for (const auto& a : factors) {
    if (a.cols() != factors.front().cols())
      throw ContractError("all CP factors must share the same column count");
    if (a.rows() == 0) throw ContractError("CP factor with zero rows");
  }
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ContractError("khatri_rao: column counts differ (" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.cols()) + ")");
  }
  const Eigen::Index p = a.rows();
  const Eigen::Index q = b.rows();
  Matrix out(p * q, a.cols());
  for (Eigen::Index r = 0; r < a.cols(); ++r)
    for (Eigen::Index i = 0; i < p; ++i)
      out.col(r).segment(i * q, q) = a(i, r) * b.col(r);
  return out;
}

Matrix mode_n_unfold(const DenseTensor& x, std::size_t mode) {
  const auto& dims = x.dims();
  if (mode >= dims.size()) throw ContractError("mode_n_unfold: mode out of range");
  const std::size_t rows = dims[mode];
  const std::size_t cols = x.size() / rows;
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  // Walk the flat array in storage order, tracking the multi-index.
  std::vector<std::size_t> index(dims.size(), 0);
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    std::size_t col = 0;
    std::size_t stride = 1;
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (m == mode) continue;
      col += index[m] * stride;
      stride *= dims[m];
    }
    out(static_cast<Eigen::Index>(index[mode]), static_cast<Eigen::Index>(col)) = x.data()[flat];
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (++index[m] < dims[m]) break;
      index[m] = 0;
    }
  }
  return out;
}

DenseTensor mode_n_refold(const Matrix& unfolded, const std::vector<std::size_t>& dims, std::size_t mode) {
  DenseTensor out(dims);
  if (mode >= dims.size()) throw ContractError("mode_n_refold: mode out of range");
  if (static_cast<std::size_t>(unfolded.rows()) != dims[mode] ||
      static_cast<std::size_t>(unfolded.size()) != out.size())
    throw ContractError("mode_n_refold: matrix shape does not match dimensions");

  std::vector<std::size_t> index(dims.size(), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t col = 0;
    std::size_t stride = 1;
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (m == mode) continue;
      col += index[m] * stride;
      stride *= dims[m];
    }
    out.data()[flat] = unfolded(static_cast<Eigen::Index>(index[mode]), static_cast<Eigen::Index>(col));
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (++index[m] < dims[m]) break;
      index[m] = 0;
    }
  }
  return out;
}

DenseTensor kruskal_reconstruct(const FactorSet& f) {
  f.validate();
  std::vector<std::size_t> dims;
  for (const auto& a : f.factors) dims.push_back(static_cast<std::size_t>(a.rows()));
  DenseTensor out(dims);
  const Eigen::Index rank = f.rank();

  std::vector<std::size_t> index(dims.size(), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < rank; ++r) {
      double term = 1.0;
      for (std::size_t m = 0; m < dims.size(); ++m)
        term *= f.factors[m](static_cast<Eigen::Index>(index[m]), r);
      acc += term;
    }
    out.data()[flat] = acc;
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (++index[m] < dims[m]) break;
      index[m] = 0;
    }
  }
  return out;
}

Matrix khatri_rao_chain(const std::vector<Matrix>& factors, std::size_t skip) {
  if (factors.empty()) throw ContractError("khatri_rao_chain: no factors");
  if (skip >= factors.size()) throw ContractError("khatri_rao_chain: skipped mode out of range");
  const Eigen::Index rank = factors.front().cols();

  // Accumulate from the highest mode down so A_1 ends up fastest.
  Matrix acc = Matrix::Ones(1, rank);
  for (std::size_t m = factors.size(); m-- > 0;) {
    if (m == skip) continue;
    acc = khatri_rao(acc, factors[m]);
  }
  return acc;
}

Matrix khatri_rao_chain(const FactorSet& f, std::size_t skip) {
  f.validate();
  return khatri_rao_chain(f.factors, skip);
}

Matrix chain_product(const std::vector<Matrix>& ms, Eigen::Index identity_size) {
  if (ms.empty()) return Matrix::Identity(identity_size, identity_size);
  Matrix acc = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (acc.cols() != ms[i].rows()) {
      throw ContractError("chain_product: factor " + std::to_string(i + 1) + " has " +
                          std::to_string(ms[i].rows()) + " rows, expected " + std::to_string(acc.cols()));
    }
    acc = acc * ms[i];
  }
  return acc;
}

}  // namespace abpl
