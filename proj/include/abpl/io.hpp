#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "abpl/core.hpp"
#include "abpl/multilinear.hpp"

namespace abpl {

/// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `%%MatrixMarket matrix coordinate|array real|integer general` into a
/// dense matrix. Unlisted coordinate entries are zero; repeated coordinates
/// accumulate.
Matrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
Matrix load_matrix_market(const std::filesystem::path& path);

/// Writes the dense `array` variant with 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& m);
void save_matrix_market(const std::filesystem::path& path, const Matrix& m);

/// Text tensor format: line 1 `ndims`, line 2 the dims, then one value per
/// line in first-index-fastest order.
DenseTensor read_dense_tensor(std::istream& in, const std::string& source = "<stream>");
DenseTensor load_dense_tensor(const std::filesystem::path& path);
void write_dense_tensor(std::ostream& out, const DenseTensor& t);
void save_dense_tensor(const std::filesystem::path& path, const DenseTensor& t);

/// Shortest-safe decimal form used by all writers (%.17g).
std::string format_real(double v);

}  // namespace abpl
