#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "abpl/solver.hpp"
#include "abpl/trace.hpp"

namespace abpl {

enum class ProblemKind { msnmf, sntd };

/// One benchmark run. Field names double as configuration-file keys.
struct RunConfig {
  ProblemKind problem = ProblemKind::msnmf;
  std::string data;   // dataset path; empty means synthetic
  std::string out = "trace.csv";
  std::uint64_t seed = 1;
  OrderMode order = OrderMode::cyclic;
  MomentumSchedule schedule = MomentumSchedule::adaptive;
  std::optional<double> t;       // default depends on the problem
  std::optional<double> beta_1;  // default depends on problem and schedule
  double beta_max = 0.9999;
  double gamma = 1.5;
  std::optional<double> eps;     // msnmf 1e-4, sntd 1e-6
  std::size_t max_iters = 2000;
  double max_time = 600.0;
  double sparsity = 0.30;
  std::optional<std::size_t> rank;
  /// msnmf: factor chain "30x8,8x20"; sntd: tensor dims "6x5x4".
  std::string shapes;
  std::optional<double> density;  // synthetic factor density, defaults to sparsity
  std::size_t repeat = 1;

  void validate() const;
  /// Solver settings after applying the per-problem defaults.
  SolverConfig solver_config() const;
};

/// Reads flat `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines raise ParseError.
std::map<std::string, std::string> read_config_file(std::istream& in, const std::string& source = "<stream>");

/// Applies one key/value pair to cfg; throws ContractError on unknown keys or
/// bad values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

ProblemKind parse_problem_kind(const std::string& s);

/// "30x8,8x20" -> {{30,8},{8,20}}.
std::vector<BlockShape> parse_chain_shapes(const std::string& s);
/// "6x5x4" -> {6,5,4}.
std::vector<std::size_t> parse_tensor_dims(const std::string& s);

struct BenchOutcome {
  RunResult run;
  AcceptanceStats stats;
  std::filesystem::path trace_path;
  std::vector<std::filesystem::path> factor_paths;
};

/// Builds the problem, runs the solver, writes the trace CSV and the final
/// factors (`<stem>.factor<i>.mtx` next to the trace).
BenchOutcome run_single(const RunConfig& cfg);

/// Runs cfg.repeat seeds (seed, seed+1, ...) concurrently when repeat > 1,
/// writing `<stem>.seed<N>.csv` per run. Prints summaries to log, errors to
/// err; returns a process exit status.
int run_benchmark(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace abpl
