#include "abpl/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace abpl {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  /// Next non-blank line that is not a '%' comment; false at EOF.
  bool next_content(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_blank(line) || line.front() == '%') continue;
      return true;
    }
    return false;
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

  double real(const std::string& tok) const {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("expected a real number, got '" + tok + "'");
    return v;
  }

  std::size_t count(const std::string& tok) const {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      fail("expected a nonnegative integer, got '" + tok + "'");
    return v;
  }

  std::size_t line_no() const { return line_no_; }
  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return f;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return f;
}

}  // namespace

Matrix read_matrix_market(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  if (!reader.next_raw(line)) reader.fail("empty file");
  const auto header = split_ws(line);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix")
    reader.fail("malformed header, expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string format = lower(header[2]);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (format != "coordinate" && format != "array") reader.fail("unknown format '" + header[2] + "'");
  if (field != "real" && field != "double" && field != "integer")
    reader.fail("unsupported field '" + header[3] + "' (only real data is accepted)");
  if (symmetry != "general") reader.fail("unsupported symmetry '" + header[4] + "'");

  if (!reader.next_content(line)) reader.fail("missing size line");
  const auto size_tok = split_ws(line);
  const bool coordinate = format == "coordinate";
  if (size_tok.size() != (coordinate ? 3u : 2u)) reader.fail("malformed size line");
  const std::size_t rows = reader.count(size_tok[0]);
  const std::size_t cols = reader.count(size_tok[1]);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

  if (coordinate) {
    const std::size_t nnz = reader.count(size_tok[2]);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!reader.next_content(line))
        reader.fail("expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
      const auto tok = split_ws(line);
      if (tok.size() != 3) reader.fail("coordinate entry needs 'row col value'");
      const std::size_t i = reader.count(tok[0]);
      const std::size_t j = reader.count(tok[1]);
      if (i < 1 || i > rows || j < 1 || j > cols)
        reader.fail("index (" + tok[0] + ", " + tok[1] + ") outside " + std::to_string(rows) + "x" +
                    std::to_string(cols));
      m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) += reader.real(tok[2]);
    }
  } else {
    for (std::size_t e = 0; e < rows * cols; ++e) {
      if (!reader.next_content(line))
        reader.fail("expected " + std::to_string(rows * cols) + " values, found " + std::to_string(e));
      const auto tok = split_ws(line);
      if (tok.size() != 1) reader.fail("array entry needs exactly one value");
      m(static_cast<Eigen::Index>(e % rows), static_cast<Eigen::Index>(e / rows)) = reader.real(tok[0]);
    }
  }
  if (reader.next_content(line)) reader.fail("trailing data after the last entry");
  return m;
}

Matrix load_matrix_market(const std::filesystem::path& path) {
  auto f = open_input(path);
  return read_matrix_market(f, path.string());
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << format_real(m(i, j)) << '\n';
}

void save_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  auto f = open_output(path);
  write_matrix_market(f, m);
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

DenseTensor read_dense_tensor(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  if (!reader.next_content(line)) reader.fail("missing ndims line");
  auto tok = split_ws(line);
  if (tok.size() != 1) reader.fail("first line must hold only ndims");
  const std::size_t ndims = reader.count(tok[0]);
  if (ndims < 1) reader.fail("ndims must be positive");

  if (!reader.next_content(line)) reader.fail("missing dimension line");
  tok = split_ws(line);
  if (tok.size() != ndims)
    reader.fail("expected " + std::to_string(ndims) + " dimensions, found " + std::to_string(tok.size()));
  std::vector<std::size_t> dims;
  std::size_t expected = 1;
  for (const auto& t : tok) {
    dims.push_back(reader.count(t));
    if (dims.back() == 0) reader.fail("dimensions must be positive");
    expected *= dims.back();
  }

  std::vector<double> values;
  values.reserve(expected);
  while (reader.next_content(line)) {
    for (const auto& t : split_ws(line)) values.push_back(reader.real(t));
  }
  if (values.size() != expected) {
    throw ParseError(source, 0,
                     "tensor value count mismatch: expected " + std::to_string(expected) + ", found " +
                         std::to_string(values.size()));
  }
  return DenseTensor(std::move(dims), std::move(values));
}

DenseTensor load_dense_tensor(const std::filesystem::path& path) {
  auto f = open_input(path);
  return read_dense_tensor(f, path.string());
}

void write_dense_tensor(std::ostream& out, const DenseTensor& t) {
  out << t.order() << '\n';
  for (std::size_t m = 0; m < t.order(); ++m) out << (m ? " " : "") << t.dims()[m];
  out << '\n';
  for (double v : t.data()) out << format_real(v) << '\n';
}

void save_dense_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  auto f = open_output(path);
  write_dense_tensor(f, t);
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace abpl
