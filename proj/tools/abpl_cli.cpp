// Benchmark driver for the block proximal solvers.
//
//   abpl msnmf [--config FILE] [--data A.mtx] [--shapes 30x8,8x20] ...
//   abpl sntd  [--config FILE] [--data X.tensor] [--rank 3] ...
//   abpl synth --problem msnmf|sntd --shapes ... [--rank R] --out FILE
//   abpl stats --data trace.csv

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abpl/applications.hpp"
#include "abpl/bench.hpp"
#include "abpl/io.hpp"
#include "abpl/synthetic.hpp"
#include "abpl/trace.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::map<std::string, std::string> values;  // config key -> value, only flags actually given
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "key = value configuration file")->check(CLI::ExistingFile);
  const std::pair<const char*, const char*> keyed[] = {
      {"--data", "data"},       {"--out", "out"},           {"--seed", "seed"},
      {"--order", "order"},     {"--schedule", "schedule"}, {"--eps", "eps"},
      {"--max-iters", "max_iters"}, {"--max-time", "max_time"}, {"--sparsity", "sparsity"},
      {"--rank", "rank"},       {"--shapes", "shapes"},     {"--repeat", "repeat"},
  };
  for (const auto& [flag, key] : keyed) {
    std::string k = key;
    cmd->add_option_function<std::string>(flag, [&flags, k](const std::string& v) { flags.values[k] = v; },
                                          std::string("overrides config key '") + key + "'");
  }
}

int run_command(abpl::ProblemKind kind, const RunFlags& flags) {
  abpl::RunConfig cfg;
  try {
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      for (const auto& [k, v] : abpl::read_config_file(in, flags.config))
        abpl::apply_config_value(cfg, k, v);
    }
    for (const auto& [k, v] : flags.values) abpl::apply_config_value(cfg, k, v);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  cfg.problem = kind;
  return abpl::run_benchmark(cfg, std::cout, std::cerr);
}

int synth_command(const std::string& problem, const std::string& shapes, std::size_t rank, double density,
                  std::uint64_t seed, const std::string& out) {
  const std::filesystem::path base(out);
  auto truth_path = [&](std::size_t i) {
    auto p = base;
    p.replace_filename(base.stem().string() + ".truth" + std::to_string(i + 1) + ".mtx");
    return p;
  };
  if (abpl::parse_problem_kind(problem) == abpl::ProblemKind::msnmf) {
    const auto synth = abpl::generate_msnmf(abpl::parse_chain_shapes(shapes), density, seed);
    abpl::save_matrix_market(base, synth.data);
    for (std::size_t i = 0; i < synth.truth.size(); ++i) abpl::save_matrix_market(truth_path(i), synth.truth[i]);
  } else {
    const auto synth =
        abpl::generate_sntd(abpl::parse_tensor_dims(shapes), static_cast<Eigen::Index>(rank), density, seed);
    abpl::save_dense_tensor(base, synth.data);
    for (std::size_t i = 0; i < synth.truth.size(); ++i) abpl::save_matrix_market(truth_path(i), synth.truth[i]);
  }
  std::cout << "wrote " << base.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated block proximal linear solvers: sparse NMF and CP benchmarks"};
  app.require_subcommand(1);

  RunFlags msnmf_flags, sntd_flags;
  auto* msnmf = app.add_subcommand("msnmf", "l0-constrained multi-layer NMF benchmark");
  add_run_flags(msnmf, msnmf_flags);
  auto* sntd = app.add_subcommand("sntd", "l0-constrained nonnegative CP benchmark");
  add_run_flags(sntd, sntd_flags);

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset and its ground-truth factors");
  std::string synth_problem = "msnmf", synth_shapes, synth_out;
  std::size_t synth_rank = 3;
  double synth_density = 0.3;
  std::uint64_t synth_seed = 1;
  synth->add_option("--problem", synth_problem, "msnmf or sntd")->check(CLI::IsMember({"msnmf", "sntd"}));
  synth->add_option("--shapes", synth_shapes, "factor chain (msnmf) or tensor dims (sntd)")->required();
  synth->add_option("--rank", synth_rank, "CP rank (sntd)");
  synth->add_option("--density", synth_density, "fraction of nonzero factor entries");
  synth->add_option("--sparsity", synth_density, "alias for --density");
  synth->add_option("--seed", synth_seed);
  synth->add_option("--out", synth_out, "dataset path")->required();

  auto* stats = app.add_subcommand("stats", "branch statistics of a trace CSV");
  std::string stats_path;
  stats->add_option("--data", stats_path, "trace CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*msnmf) return run_command(abpl::ProblemKind::msnmf, msnmf_flags);
    if (*sntd) return run_command(abpl::ProblemKind::sntd, sntd_flags);
    if (*synth) return synth_command(synth_problem, synth_shapes, synth_rank, synth_density, synth_seed, synth_out);
    if (*stats) {
      std::ifstream in(stats_path);
      const auto trace = abpl::read_trace_csv(in, stats_path);
      abpl::print_acceptance_stats(std::cout, abpl::acceptance_stats(trace, false));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
