#include "abpl/trace.hpp"

#include <charconv>
#include <sstream>

#include "abpl/io.hpp"

namespace abpl {

std::string format_order(const std::vector<std::size_t>& order) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(order[i] + 1);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.k << ',' << format_real(r.elapsed_s) << ',' << format_real(r.objective) << ','
        << format_real(r.relerr) << ',' << format_real(r.beta) << ',' << to_string(r.branch) << ','
        << r.sweep_count << ',' << format_real(r.residual_norm) << ',' << format_order(r.order) << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, const std::string& source, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(source, line, "bad number '" + tok + "'");
  return v;
}

}  // namespace

std::vector<IterationRecord> read_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ParseError(source, 1, "unexpected trace header");

  std::vector<IterationRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw ParseError(source, line_no, "expected 9 columns");
    IterationRecord r;
    r.k = parse_number<std::size_t>(f[0], source, line_no);
    r.elapsed_s = parse_number<double>(f[1], source, line_no);
    r.objective = parse_number<double>(f[2], source, line_no);
    r.relerr = parse_number<double>(f[3], source, line_no);
    r.beta = parse_number<double>(f[4], source, line_no);
    try {
      r.branch = parse_branch(f[5]);
    } catch (const ContractError& e) {
      throw ParseError(source, line_no, e.what());
    }
    r.sweep_count = parse_number<int>(f[6], source, line_no);
    r.residual_norm = parse_number<double>(f[7], source, line_no);
    for (const auto& tok : split(f[8], '-')) {
      const auto idx = parse_number<std::size_t>(tok, source, line_no);
      if (idx < 1) throw ParseError(source, line_no, "block order is 1-based");
      r.order.push_back(idx - 1);
    }
    trace.push_back(std::move(r));
  }
  return trace;
}

double AcceptanceStats::fraction(Branch b) const {
  return iterations ? static_cast<double>(count(b)) / static_cast<double>(iterations) : 0.0;
}

AcceptanceStats acceptance_stats(const std::vector<IterationRecord>& trace, bool with_supports) {
  if (trace.empty()) throw ContractError("acceptance_stats: empty trace");
  AcceptanceStats s;
  s.iterations = trace.size();
  std::size_t changes = 0;
  std::size_t accepts = 0;
  for (const auto& r : trace) {
    ++s.counts[static_cast<std::size_t>(r.branch)];
    if (r.support_changed) {
      ++changes;
      if (r.branch == Branch::accept_extrapolated) ++accepts;
    }
  }
  if (with_supports) {
    s.support_changes = changes;
    s.accepts_with_support_change = accepts;
  }
  return s;
}

void print_acceptance_stats(std::ostream& out, const AcceptanceStats& s) {
  out << "iterations: " << s.iterations << '\n';
  for (Branch b : {Branch::accept_extrapolated, Branch::keep_extrapolated_after_restart,
                   Branch::take_restart, Branch::no_momentum}) {
    std::ostringstream frac;
    frac.precision(4);
    frac << std::fixed << s.fraction(b);
    out << "  " << to_string(b) << ": " << s.count(b) << " (" << frac.str() << ")\n";
  }
  if (s.support_changes) {
    out << "  support changes: " << *s.support_changes
        << " (accepted extrapolations among them: " << *s.accepts_with_support_change << ")\n";
  } else {
    out << "  support changes: n/a (not recorded in trace files)\n";
  }
}

}  // namespace abpl
