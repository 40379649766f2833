#include "abpl/bench.hpp"

#include <charconv>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "abpl/applications.hpp"
#include "abpl/io.hpp"
#include "abpl/synthetic.hpp"

namespace abpl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ContractError("config key '" + key + "': expected a real number, got '" + v + "'");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ContractError("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(trim(part));
  return out;
}

std::filesystem::path sibling(const std::filesystem::path& base, const std::string& suffix) {
  auto p = base;
  p.replace_filename(base.stem().string() + suffix);
  return p;
}

}  // namespace

ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "msnmf") return ProblemKind::msnmf;
  if (s == "sntd") return ProblemKind::sntd;
  throw ContractError("unknown problem kind '" + s + "'");
}

std::vector<BlockShape> parse_chain_shapes(const std::string& s) {
  std::vector<BlockShape> out;
  for (const auto& part : split(s, ',')) {
    const auto dims = split(part, 'x');
    if (dims.size() != 2) throw ContractError("bad factor shape '" + part + "', expected RxC");
    const auto r = to_unsigned("shapes", dims[0]);
    const auto c = to_unsigned("shapes", dims[1]);
    if (r == 0 || c == 0) throw ContractError("factor shape '" + part + "' must be positive");
    out.push_back({static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)});
  }
  if (out.empty()) throw ContractError("empty factor shape list");
  return out;
}

std::vector<std::size_t> parse_tensor_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& d : split(s, 'x')) {
    const auto v = to_unsigned("shapes", d);
    if (v == 0) throw ContractError("tensor dimensions must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ContractError("empty tensor dimension list");
  return out;
}

std::map<std::string, std::string> read_config_file(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source, line_no, "missing key");
    RunConfig probe;
    try {
      apply_config_value(probe, key, value);
    } catch (const ContractError& e) {
      throw ParseError(source, line_no, e.what());
    }
    out[key] = value;
  }
  return out;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "problem") cfg.problem = parse_problem_kind(v);
  else if (key == "data") cfg.data = v;
  else if (key == "out") cfg.out = v;
  else if (key == "seed") cfg.seed = to_unsigned(key, v);
  else if (key == "order") cfg.order = parse_order_mode(v);
  else if (key == "schedule") cfg.schedule = parse_schedule(v);
  else if (key == "t") cfg.t = to_real(key, v);
  else if (key == "beta_1") cfg.beta_1 = to_real(key, v);
  else if (key == "beta_max") cfg.beta_max = to_real(key, v);
  else if (key == "gamma") cfg.gamma = to_real(key, v);
  else if (key == "eps") cfg.eps = to_real(key, v);
  else if (key == "max_iters") cfg.max_iters = static_cast<std::size_t>(to_unsigned(key, v));
  else if (key == "max_time") cfg.max_time = to_real(key, v);
  else if (key == "sparsity") cfg.sparsity = to_real(key, v);
  else if (key == "rank") cfg.rank = static_cast<std::size_t>(to_unsigned(key, v));
  else if (key == "shapes") cfg.shapes = v;
  else if (key == "density") cfg.density = to_real(key, v);
  else if (key == "repeat") cfg.repeat = static_cast<std::size_t>(to_unsigned(key, v));
  else throw ContractError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ContractError("sparsity fraction must lie in (0, 1]");
  if (density && !(*density > 0.0 && *density <= 1.0))
    throw ContractError("density must lie in (0, 1]");
  if (repeat < 1) throw ContractError("repeat must be at least 1");
  if (rank && *rank < 1) throw ContractError("rank must be at least 1");
  if (out.empty()) throw ContractError("an output trace path is required");
  solver_config().validate(1);
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  const bool tensor = problem == ProblemKind::sntd;
  c.schedule = schedule;
  c.t = t.value_or(tensor ? 1.3 : 1.1);
  if (beta_1) {
    c.beta_1 = *beta_1;
  } else if (schedule == MomentumSchedule::adaptive) {
    c.beta_1 = tensor ? 0.2 : 0.6;
  } else {
    c.beta_1 = 0.0;
  }
  c.beta_max = beta_max;
  c.gamma = {gamma};
  c.order_mode = order;
  c.k_max = max_iters;
  c.eps = eps.value_or(tensor ? 1e-6 : 1e-4);
  c.max_time_s = max_time;
  c.seed = derive_seed(seed, 2);
  return c;
}

BenchOutcome run_single(const RunConfig& cfg) {
  cfg.validate();
  const SolverConfig solver = cfg.solver_config();
  const double density = cfg.density.value_or(cfg.sparsity);
  Rng init_rng(derive_seed(cfg.seed, 1));

  BenchOutcome outcome;
  BlockProblem problem;
  RelErrFn relerr_fn;
  BlockVars x0;

  if (cfg.problem == ProblemKind::msnmf) {
    MsnmfSpec spec;
    if (cfg.data.empty()) {
      spec.block_shapes = parse_chain_shapes(cfg.shapes.empty() ? "30x8,8x20" : cfg.shapes);
      spec.data = generate_msnmf(spec.block_shapes, density, cfg.seed).data;
    } else {
      spec.data = load_matrix_market(cfg.data);
      if (!cfg.shapes.empty()) {
        spec.block_shapes = parse_chain_shapes(cfg.shapes);
      } else if (cfg.rank) {
        const auto r = static_cast<Eigen::Index>(*cfg.rank);
        spec.block_shapes = {{spec.data.rows(), r}, {r, spec.data.cols()}};
      } else {
        throw ContractError("msnmf with a dataset needs --shapes or --rank");
      }
    }
    for (const auto& s : spec.block_shapes)
      spec.sparsity.push_back(sparsity_from_fraction(cfg.sparsity, static_cast<std::size_t>(s.rows * s.cols)));
    spec.gamma = solver.gamma;
    problem = make_msnmf_problem(spec);
    relerr_fn = [spec](const BlockVars& v) { return relerr(spec, v); };
    x0 = random_sparse_blocks(spec.block_shapes, cfg.sparsity, init_rng);
  } else {
    SntdSpec spec;
    spec.rank = static_cast<Eigen::Index>(cfg.rank.value_or(3));
    if (cfg.data.empty()) {
      const auto dims = parse_tensor_dims(cfg.shapes.empty() ? "6x5x4" : cfg.shapes);
      spec.data = generate_sntd(dims, spec.rank, density, cfg.seed).data;
    } else {
      spec.data = load_dense_tensor(cfg.data);
    }
    for (auto d : spec.data.dims())
      spec.sparsity.push_back(sparsity_from_fraction(cfg.sparsity, d * static_cast<std::size_t>(spec.rank)));
    spec.gamma = solver.gamma;
    problem = make_sntd_problem(spec);
    relerr_fn = [spec](const BlockVars& v) { return relerr(spec, v); };
    x0 = random_sparse_blocks(spec.block_shapes(), cfg.sparsity, init_rng);
  }

  outcome.run = abpl_plus_run(problem, x0, solver, relerr_fn);
  outcome.stats = acceptance_stats(outcome.run.trace);

  outcome.trace_path = cfg.out;
  if (outcome.trace_path.has_parent_path()) std::filesystem::create_directories(outcome.trace_path.parent_path());
  std::ofstream csv(outcome.trace_path);
  if (!csv) throw std::runtime_error("cannot open '" + cfg.out + "' for writing");
  write_trace_csv(csv, outcome.run.trace);
  if (!csv) throw std::runtime_error("write failed for '" + cfg.out + "'");

  for (std::size_t i = 0; i < outcome.run.final_vars.size(); ++i) {
    auto path = sibling(outcome.trace_path, ".factor" + std::to_string(i + 1) + ".mtx");
    save_matrix_market(path, outcome.run.final_vars[i]);
    outcome.factor_paths.push_back(std::move(path));
  }
  return outcome;
}

namespace {

void print_summary(std::ostream& log, const RunConfig& cfg, const BenchOutcome& o) {
  const auto& run = o.run;
  log << (cfg.problem == ProblemKind::msnmf ? "msnmf" : "sntd") << " seed=" << cfg.seed
      << " schedule=" << to_string(cfg.schedule) << " order=" << to_string(cfg.order) << '\n';
  log << "stop: " << to_string(run.stop_reason) << " after " << run.trace.size() << " iterations\n";
  log << "objective: " << format_real(run.initial_objective) << " -> "
      << format_real(run.trace.back().objective) << '\n';
  log << "relerr: " << format_real(run.initial_relerr) << " -> " << format_real(run.trace.back().relerr)
      << '\n';
  log << "trace: " << o.trace_path.string() << '\n';
  print_acceptance_stats(log, o.stats);
}

}  // namespace

int run_benchmark(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.repeat == 1) {
      print_summary(log, cfg, run_single(cfg));
      return 0;
    }

    std::vector<RunConfig> configs;
    const std::filesystem::path base(cfg.out);
    for (std::size_t r = 0; r < cfg.repeat; ++r) {
      RunConfig c = cfg;
      c.seed = cfg.seed + r;
      c.repeat = 1;
      c.out = sibling(base, ".seed" + std::to_string(c.seed) + base.extension().string()).string();
      configs.push_back(std::move(c));
    }

    std::vector<std::optional<BenchOutcome>> outcomes(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    {
      std::vector<std::jthread> workers;
      for (std::size_t r = 0; r < configs.size(); ++r) {
        workers.emplace_back([&, r] {
          try {
            outcomes[r] = run_single(configs[r]);
          } catch (...) {
            errors[r] = std::current_exception();
          }
        });
      }
    }

    int status = 0;
    for (std::size_t r = 0; r < configs.size(); ++r) {
      if (errors[r]) {
        try {
          std::rethrow_exception(errors[r]);
        } catch (const std::exception& e) {
          err << "seed " << configs[r].seed << ": " << e.what() << '\n';
        }
        status = 1;
        continue;
      }
      print_summary(log, configs[r], *outcomes[r]);
    }
    return status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace abpl
