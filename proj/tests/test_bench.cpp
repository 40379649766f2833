#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "abpl/applications.hpp"
#include "abpl/bench.hpp"
#include "abpl/io.hpp"
#include "abpl/stopping.hpp"
#include "abpl/synthetic.hpp"
#include "abpl/trace.hpp"
#include "test_support.hpp"

using namespace abpl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("abpl_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check_stop") {
  SUBCASE("constant relerr stops on the delta rule") {
    StopState s(0.5, {1e-4, 100.0, 1000});
    CHECK(s.check(0.5, 0.0, 1) == StopReason::relerr_delta);
  }
  SUBCASE("eps = 0 never fires the delta rule") {
    StopState s(0.5, {0.0, 100.0, 1000});
    CHECK(s.check(0.5, 0.0, 1) == StopReason::none);
    CHECK(s.check(0.5, 0.0, 2) == StopReason::none);
  }
  SUBCASE("a change of 5e-4 keeps going") {
    StopState s(0.700, {1e-4, 100.0, 1000});
    CHECK(s.check(0.6995, 0.0, 1) == StopReason::none);
    CHECK(s.last_delta() == doctest::Approx(5e-4));
  }
  SUBCASE("time and iteration limits") {
    StopState s(1.0, {0.0, 2.0, 5});
    CHECK(s.check(0.9, 2.0, 1) == StopReason::time_limit);
    CHECK(s.check(0.8, 0.5, 5) == StopReason::iteration_limit);
    CHECK(s.check(0.7, 0.5, 4) == StopReason::none);
  }
  SUBCASE("the delta compares consecutive values only") {
    StopState s(1.0, {1e-3, 100.0, 1000});
    CHECK(s.check(0.5, 0.0, 1) == StopReason::none);
    CHECK(s.check(0.4995, 0.0, 2) == StopReason::relerr_delta);
  }
}

TEST_CASE("matrix market reader") {
  SUBCASE("single coordinate entry") {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 1\n1 1 3.5\n");
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 3.5;
    CHECK(read_matrix_market(in) == expected);
  }
  SUBCASE("empty coordinate list") {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 3 0\n");
    CHECK(read_matrix_market(in) == Matrix::Zero(2, 3));
  }
  SUBCASE("array variant is column-major") {
    std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    Matrix expected(2, 2);
    expected << 1, 3, 2, 4;
    CHECK(read_matrix_market(in) == expected);
  }
  SUBCASE("symmetric files are rejected") {
    std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(in), doctest::Contains("unsupported symmetry"), ParseError);
  }
  SUBCASE("out-of-range index names the line") {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n3 1 2\n");
    try {
      read_matrix_market(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("complex and pattern fields are rejected") {
    std::istringstream c("%%MatrixMarket matrix coordinate complex general\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(c), ParseError);
    std::istringstream p("%%MatrixMarket matrix coordinate pattern general\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(p), ParseError);
  }
  SUBCASE("malformed header") {
    std::istringstream in("MatrixMarket matrix coordinate real general\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(in), ParseError);
  }
  SUBCASE("missing entries") {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n");
    CHECK_THROWS_AS(read_matrix_market(in), ParseError);
  }
}

TEST_CASE("dense tensor reader") {
  std::istringstream one("1\n3\n1\n2\n3\n");
  CHECK(read_dense_tensor(one) == DenseTensor({3}, {1, 2, 3}));
  std::istringstream short_data("2\n2 2\n1\n2\n3\n");
  CHECK_THROWS_WITH_AS(read_dense_tensor(short_data), doctest::Contains("expected 4, found 3"), ParseError);
  std::istringstream bad_dims("3\n2 2\n1\n");
  CHECK_THROWS_AS(read_dense_tensor(bad_dims), ParseError);
}

TEST_CASE("save then load reproduces values exactly") {
  const auto dir = scratch_dir("roundtrip");
  Rng rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = testing_support::uniform_matrix(1 + static_cast<Eigen::Index>(rng.below(6)),
                                                     1 + static_cast<Eigen::Index>(rng.below(6)), rng, -1e3, 1e3);
    save_matrix_market(dir / "m.mtx", m);
    CHECK(load_matrix_market(dir / "m.mtx") == m);

    std::vector<std::size_t> dims;
    for (std::uint64_t k = 0, n = 1 + rng.below(4); k < n; ++k) dims.push_back(1 + rng.below(4));
    DenseTensor t(dims);
    for (auto& v : t.data()) v = (rng.unit() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    save_dense_tensor(dir / "t.tensor", t);
    CHECK(load_dense_tensor(dir / "t.tensor") == t);
  }
  const DenseTensor cube({2, 2, 2}, {1, 3, 2, 4, 5, 7, 6, 8});
  save_dense_tensor(dir / "cube.tensor", cube);
  CHECK(load_dense_tensor(dir / "cube.tensor") == cube);
  CHECK_THROWS_WITH_AS(load_matrix_market(dir / "missing.mtx"), doctest::Contains("missing.mtx"), std::runtime_error);
}

TEST_CASE("synthetic generation") {
  const auto a = generate_msnmf({{2, 1}, {1, 2}}, 1.0, 5);
  CHECK((a.data.array() > 0.0).all());
  const auto b = generate_msnmf({{2, 1}, {1, 2}}, 1.0, 5);
  CHECK(a.data == b.data);

  const auto big = generate_msnmf({{30, 8}, {8, 20}}, 0.3, 7);
  MsnmfSpec spec;
  spec.data = big.data;
  spec.block_shapes = {{30, 8}, {8, 20}};
  CHECK(relerr(spec, big.truth) == 0.0);
  CHECK(nonzero_count(big.truth[0]) == 72);
  CHECK(nonzero_count(big.truth[1]) == 48);

  const auto t1 = generate_sntd({6, 5, 4}, 3, 0.3, 9);
  const auto t2 = generate_sntd({6, 5, 4}, 3, 0.3, 9);
  CHECK(t1.data == t2.data);
  SntdSpec tspec;
  tspec.data = t1.data;
  tspec.rank = 3;
  CHECK(relerr(tspec, t1.truth) == 0.0);

  CHECK_THROWS_AS(generate_msnmf({{2, 3}, {2, 2}}, 0.5, 1), ContractError);
  CHECK_THROWS_AS(generate_msnmf({{2, 2}}, 0.0, 1), ContractError);
}

TEST_CASE("acceptance_stats") {
  IterationRecord r;
  r.branch = Branch::no_momentum;
  const auto single = acceptance_stats({r});
  CHECK(single.fraction(Branch::no_momentum) == 1.0);
  CHECK(single.fraction(Branch::accept_extrapolated) == 0.0);

  std::vector<IterationRecord> trace(4, r);
  trace[0].branch = Branch::accept_extrapolated;
  trace[1].branch = Branch::take_restart;
  trace[1].support_changed = true;
  trace[2].branch = Branch::keep_extrapolated_after_restart;
  trace[2].support_changed = true;
  const auto s = acceptance_stats(trace);
  CHECK(s.count(Branch::accept_extrapolated) == 1);
  CHECK(s.count(Branch::no_momentum) == 1);
  CHECK(*s.support_changes == 2);
  CHECK(*s.accepts_with_support_change == 0);
  double total = 0.0;
  for (Branch b : {Branch::accept_extrapolated, Branch::keep_extrapolated_after_restart, Branch::take_restart,
                   Branch::no_momentum})
    total += s.fraction(b);
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_AS(acceptance_stats({}), ContractError);
}

TEST_CASE("trace CSV round trip") {
  std::vector<IterationRecord> trace(2);
  trace[0] = {1, 0.01, 12.5, 0.3, 0.6, Branch::accept_extrapolated, {1, 0, 2}, 1, 0.25, false};
  trace[1] = {2, 0.02, 12.0, 0.29, 0.66, Branch::take_restart, {0, 1, 2}, 2, 0.125, false};
  std::stringstream ss;
  write_trace_csv(ss, trace);
  const std::string text = ss.str();
  CHECK(text.rfind("iter,elapsed_s,objective,relerr,beta,branch,sweeps,residual,order\n", 0) == 0);
  CHECK(text.find(",accept_extrapolated,1,0.25,2-1-3\n") != std::string::npos);
  const auto back = read_trace_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].branch == Branch::take_restart);
  CHECK(back[1].order == std::vector<std::size_t>{0, 1, 2});
  CHECK(back[0].objective == 12.5);

  std::istringstream bad("iter,objective\n");
  CHECK_THROWS_AS(read_trace_csv(bad), ParseError);
}

TEST_CASE("config files") {
  std::istringstream in("# comment\nschedule = fista\nmax_iters = 50 # trailing\n\nsparsity=0.25\n");
  const auto values = read_config_file(in);
  RunConfig cfg;
  for (const auto& [k, v] : values) apply_config_value(cfg, k, v);
  CHECK(cfg.schedule == MomentumSchedule::fista);
  CHECK(cfg.max_iters == 50);
  CHECK(cfg.sparsity == 0.25);
  CHECK(cfg.solver_config().beta_1 == 0.0);

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(read_config_file(unknown), ParseError);
  std::istringstream no_eq("schedule fista\n");
  CHECK_THROWS_AS(read_config_file(no_eq), ParseError);
}

TEST_CASE("per-problem defaults") {
  RunConfig m;
  const auto ms = m.solver_config();
  CHECK(ms.t == 1.1);
  CHECK(ms.beta_1 == 0.6);
  CHECK(ms.beta_max == 0.9999);
  CHECK(ms.gamma == std::vector<double>{1.5});
  CHECK(ms.eps == 1e-4);
  RunConfig t;
  t.problem = ProblemKind::sntd;
  const auto ts = t.solver_config();
  CHECK(ts.t == 1.3);
  CHECK(ts.beta_1 == 0.2);
  RunConfig none;
  none.schedule = MomentumSchedule::none;
  CHECK(none.solver_config().beta_1 == 0.0);
}

TEST_CASE("shape parsing") {
  const auto chain = parse_chain_shapes("30x8,8x20");
  REQUIRE(chain.size() == 2);
  CHECK(chain[1].rows == 8);
  CHECK(chain[1].cols == 20);
  CHECK(parse_tensor_dims("6x5x4") == std::vector<std::size_t>{6, 5, 4});
  CHECK_THROWS_AS(parse_chain_shapes("30x8x2"), ContractError);
  CHECK_THROWS_AS(parse_tensor_dims("6x0"), ContractError);
}

TEST_CASE("run_benchmark") {
  const auto dir = scratch_dir("bench");
  RunConfig cfg;
  cfg.out = (dir / "trace.csv").string();
  cfg.max_iters = 50;
  std::ostringstream log, err;
  CHECK(run_benchmark(cfg, log, err) == 0);
  CHECK(slurp(dir / "trace.csv").rfind(kTraceHeader, 0) == 0);
  CHECK(fs::exists(dir / "trace.factor1.mtx"));
  CHECK(load_matrix_market(dir / "trace.factor2.mtx").rows() == 8);

  RunConfig missing = cfg;
  missing.data = (dir / "nope.mtx").string();
  missing.rank = 4;
  std::ostringstream log2, err2;
  CHECK(run_benchmark(missing, log2, err2) != 0);
  CHECK(err2.str().find("nope.mtx") != std::string::npos);

  RunConfig tensor;
  tensor.problem = ProblemKind::sntd;
  tensor.out = (dir / "sntd.csv").string();
  tensor.max_iters = 30;
  tensor.repeat = 3;
  std::ostringstream log3, err3;
  CHECK(run_benchmark(tensor, log3, err3) == 0);
  CHECK(fs::exists(dir / "sntd.seed1.csv"));
  CHECK(fs::exists(dir / "sntd.seed3.csv"));
  CHECK(fs::exists(dir / "sntd.seed2.factor3.mtx"));
}
