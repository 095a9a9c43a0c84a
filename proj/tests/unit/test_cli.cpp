#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cjgsvd/matrix_market.hpp"
#include "support.hpp"

namespace cjgsvd::cli {
namespace {

namespace fs = std::filesystem;

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "cjgsvd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("cjgsvd_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_sparse(const fs::path& p, const SparseMatrix& m) {
  std::ofstream out(p);
  write_matrix_market(out, m);
}

const std::vector<double> kValues{0.95, 0.8, 0.7, 0.6, 0.4, 0.2};

TEST(ParseConfig, Defaults) {
  const auto cfg = parse({"--a", "a.mtx", "--gen-b", "b0", "--cmin", "0.3", "--cmax", "0.5", "--D", "2"});
  EXPECT_EQ(cfg.a_path, "a.mtx");
  EXPECT_EQ(cfg.gen_b, BKind::b0);
  EXPECT_DOUBLE_EQ(cfg.mu, 1.1);
  EXPECT_EQ(cfg.samples, 20u);
  EXPECT_EQ(cfg.weights, Weights{});
  EXPECT_EQ(cfg.mode, ModeChoice::automatic);
  EXPECT_DOUBLE_EQ(cfg.tol, 1e-8);
  EXPECT_EQ(cfg.max_iters, 100u);
  EXPECT_EQ(cfg.degree_multiplier, 2.0);
  EXPECT_FALSE(cfg.degree.has_value());
}

TEST(ParseConfig, AllOptions) {
  const auto cfg = parse({"--a", "a.mtx", "--b", "b.mtx", "--cmin", "0.3", "--cmax", "0.5", "--d",
                          "40", "--mu", "1.5", "--samples", "7", "--weights", "2,1,1,0.5", "--mode",
                          "cg", "--solve-tol", "1e-12", "--tol", "1e-9", "--max-iters", "9",
                          "--seed", "42", "--report", "r.json", "--p", "3", "--kappa", "4",
                          "--oracle-check", "--quiet"});
  EXPECT_EQ(cfg.b_path, fs::path("b.mtx"));
  EXPECT_EQ(cfg.degree, 40u);
  EXPECT_EQ(cfg.weights, (Weights{2.0, 1.0, 1.0, 0.5}));
  EXPECT_EQ(cfg.mode, ModeChoice::cg);
  EXPECT_EQ(cfg.samples, 7u);
  EXPECT_EQ(cfg.max_iters, 9u);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.p, 3u);
  EXPECT_EQ(cfg.kappa, 4.0);
  EXPECT_TRUE(cfg.oracle_check);
  EXPECT_TRUE(cfg.quiet);
}

TEST(ParseConfig, UsageErrors) {
  const std::vector<std::string> base{"--a", "a.mtx", "--gen-b", "b0"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5"})), UsageError);  // no degree
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--d", "4", "--D", "2"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.5", "--cmax", "0.3", "--D", "2"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "1.0", "--D", "2"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "11"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "2", "--mode", "qr"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "2", "--weights", "1,1"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "2", "--weights", "1,x,1,1"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "2", "--tol", "0"})), UsageError);
  EXPECT_THROW(parse(with({"--cmin", "0.3", "--cmax", "0.5", "--D", "2", "--bogus"})), UsageError);
  EXPECT_THROW(parse({"--a", "a.mtx", "--cmin", "0.3", "--cmax", "0.5", "--D", "2"}), UsageError);
  EXPECT_THROW(parse({"--gen-b", "b0", "--cmin", "0.3", "--cmax", "0.5", "--D", "2"}), UsageError);
  EXPECT_THROW(parse({"--help"}), HelpRequested);
}

TEST(ResolvedDegree, ExplicitOrFromMultiplier) {
  RunConfig cfg;
  const auto iv = make_interval(0.7, 0.8);
  cfg.degree = 33;
  EXPECT_EQ(resolved_degree(cfg, iv), 33u);
  cfg.degree.reset();
  cfg.degree_multiplier = 2.0;
  EXPECT_EQ(resolved_degree(cfg, iv), 95u);
}

RunConfig diagonal_config() {
  RunConfig cfg;
  cfg.c_min = 0.55;
  cfg.c_max = 0.85;
  cfg.degree_multiplier = 2.0;
  cfg.mu = 1.5;
  cfg.quiet = true;
  return cfg;
}

TEST(Run, DiagonalPairReport) {
  const auto pair = testing::diagonal_pair(kValues);
  auto cfg = diagonal_config();
  cfg.oracle_check = true;
  cfg.kappa = 1.0;
  std::ostringstream log;
  const auto res = run(cfg, pair, log);
  ASSERT_EQ(res.exit_code, kOk) << res.message;
  const auto& rep = res.report;
  EXPECT_EQ(rep["status"], "converged");
  EXPECT_EQ(rep["problem"]["n"], kValues.size());
  EXPECT_EQ(rep["config"]["mode"], "dense");
  const std::size_t d = rep["degree"];
  const std::size_t p = rep["p"];
  const std::size_t k = rep["iterations"];
  EXPECT_EQ(rep["solver_nls"].get<std::size_t>(), k * d * p);
  EXPECT_EQ(rep["trace"]["nls"].get<std::size_t>(), d * cfg.samples);
  EXPECT_EQ(rep["nls"].get<std::size_t>(), k * d * p + d * cfg.samples);
  EXPECT_TRUE(rep["trace"].contains("advisory_samples"));
  ASSERT_EQ(rep["converged"].size(), 3u);
  EXPECT_NEAR(rep["converged"][0]["c"].get<double>(), 0.8, 1e-12);
  EXPECT_NEAR(rep["converged"][2]["c"].get<double>(), 0.6, 1e-12);
  EXPECT_TRUE(rep["oracle"]["count_match"].get<bool>());
  EXPECT_LE(rep["oracle"]["max_chordal"].get<double>(), 1e-10);
  EXPECT_EQ(rep["per_iteration"].size(), k + 1);
  EXPECT_TRUE(log.str().empty());
}

TEST(Run, ExplicitDimensionSkipsTrace) {
  const auto pair = testing::diagonal_pair(kValues);
  auto cfg = diagonal_config();
  cfg.p = 100;  // clamped to n
  const auto res = run(cfg, pair, std::cerr);
  ASSERT_EQ(res.exit_code, kOk) << res.message;
  EXPECT_TRUE(res.report["trace"].is_null());
  EXPECT_EQ(res.report["p"], kValues.size());
}

TEST(Run, EmptyIntervalIsNotAnError) {
  // All values sit far from the interval, so the filter has trace ≈ 0.
  const auto pair = testing::diagonal_pair({0.99, 0.98, 0.1, 0.05});
  auto cfg = diagonal_config();
  cfg.c_min = 0.5;
  cfg.c_max = 0.6;
  cfg.degree_multiplier = 4.0;
  const auto res = run(cfg, pair, std::cerr);
  EXPECT_EQ(res.exit_code, kOk) << res.message;
  const std::string status = res.report["status"];
  EXPECT_TRUE(status == "empty" || status == "converged") << status;
  EXPECT_TRUE(res.report["converged"].empty());
}

TEST(Run, StagnationExitCode) {
  const auto pair = testing::diagonal_pair({0.95, 0.75, 0.72, 0.7, 0.68, 0.66, 0.3, 0.1});
  auto cfg = diagonal_config();
  cfg.c_min = 0.6;
  cfg.c_max = 0.8;
  cfg.degree.emplace(40);
  cfg.degree_multiplier.reset();
  cfg.p = 3;
  cfg.max_iters = 200;
  const auto res = run(cfg, pair, std::cerr);
  EXPECT_EQ(res.exit_code, kStagnation);
  EXPECT_EQ(res.report["status"], "stagnation");
  EXPECT_EQ(res.report["error"]["stage"], "solve");
}

TEST(Run, MaxIterationsExitCode) {
  const auto pair = testing::random_pair(80, 90, 0.08, 8);
  RunConfig cfg;
  cfg.c_min = 0.3;
  cfg.c_max = 0.5;
  cfg.degree = 8;
  cfg.p = 20;
  cfg.max_iters = 1;
  cfg.tol = 1e-14;
  cfg.quiet = true;
  const auto res = run(cfg, pair, std::cerr);
  EXPECT_EQ(res.exit_code, kMaxIterations);
  EXPECT_EQ(res.report["status"], "max_iterations");
}

TEST(Run, UnboundedWeightsAreUsageError) {
  const auto pair = testing::diagonal_pair(kValues);
  auto cfg = diagonal_config();
  cfg.weights = Weights{0.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(run(cfg, pair, std::cerr).exit_code, kUsage);
}

TEST(Run, SingularPairIsNumericalError) {
  const auto a = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}});
  const auto b = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}});
  const auto pair = make_pair(a, b);
  const auto res = run(diagonal_config(), pair, std::cerr);
  EXPECT_EQ(res.exit_code, kNumerical);
  EXPECT_EQ(res.report["error"]["stage"], "backend");
}

TEST(RunFiles, WritesReportVectorsAndHistory) {
  TempDir dir;
  const auto pair = testing::diagonal_pair(kValues);
  write_sparse(dir.path() / "a.mtx", pair.a);
  write_sparse(dir.path() / "b.mtx", pair.b);
  auto cfg = diagonal_config();
  cfg.a_path = dir.path() / "a.mtx";
  cfg.b_path = dir.path() / "b.mtx";
  cfg.report_path = dir.path() / "report.json";
  cfg.vectors_path = dir.path() / "vec";
  cfg.history_path = dir.path() / "history.csv";
  const auto res = run(cfg, std::cerr);
  ASSERT_EQ(res.exit_code, kOk) << res.message;

  std::ifstream rin(*cfg.report_path);
  const auto rep = nlohmann::json::parse(rin);
  EXPECT_EQ(rep["status"], "converged");
  const auto x = read_matrix_market(dir.path() / "vec" / "x.mtx");
  EXPECT_EQ(x.rows(), kValues.size());
  EXPECT_EQ(x.cols(), 3u);
  EXPECT_EQ(read_matrix_market(dir.path() / "vec" / "u.mtx").cols(), 3u);
  EXPECT_EQ(read_matrix_market(dir.path() / "vec" / "v.mtx").cols(), 3u);
  std::ifstream hin(*cfg.history_path);
  std::string header;
  std::getline(hin, header);
  EXPECT_FALSE(header.empty());
}

TEST(RunFiles, GeneratedB) {
  TempDir dir;
  const auto a = testing::random_pair(40, 50, 0.15, 2).a;
  write_sparse(dir.path() / "a.mtx", a);
  RunConfig cfg;
  cfg.a_path = dir.path() / "a.mtx";
  cfg.gen_b = BKind::b0;
  cfg.c_min = 0.3;
  cfg.c_max = 0.6;
  cfg.degree_multiplier = 3.0;
  cfg.mu = 1.5;
  cfg.oracle_check = true;
  cfg.quiet = true;
  cfg.report_path = dir.path() / "r.json";
  const auto res = run(cfg, std::cerr);
  ASSERT_EQ(res.exit_code, kOk) << res.message;
  EXPECT_TRUE(res.report["oracle"]["count_match"].get<bool>());
}

TEST(RunFiles, MissingInputIsIoError) {
  RunConfig cfg = diagonal_config();
  cfg.a_path = "/nonexistent/a.mtx";
  cfg.gen_b = BKind::b0;
  EXPECT_EQ(run(cfg, std::cerr).exit_code, kIo);
}

TEST(RunFiles, MalformedInputIsIoError) {
  TempDir dir;
  std::ofstream(dir.path() / "a.mtx") << "not a matrix\n";
  RunConfig cfg = diagonal_config();
  cfg.a_path = dir.path() / "a.mtx";
  cfg.gen_b = BKind::b0;
  EXPECT_EQ(run(cfg, std::cerr).exit_code, kIo);
}

TEST(RunFiles, ColumnMismatchIsUsageError) {
  TempDir dir;
  write_sparse(dir.path() / "a.mtx", SparseMatrix::identity(4));
  write_sparse(dir.path() / "b.mtx", SparseMatrix::identity(3));
  RunConfig cfg = diagonal_config();
  cfg.a_path = dir.path() / "a.mtx";
  cfg.b_path = dir.path() / "b.mtx";
  EXPECT_EQ(run(cfg, std::cerr).exit_code, kUsage);
}

TEST(RunFiles, UnwritableReportIsIoError) {
  TempDir dir;
  const auto pair = testing::diagonal_pair(kValues);
  write_sparse(dir.path() / "a.mtx", pair.a);
  write_sparse(dir.path() / "b.mtx", pair.b);
  auto cfg = diagonal_config();
  cfg.a_path = dir.path() / "a.mtx";
  cfg.b_path = dir.path() / "b.mtx";
  cfg.report_path = dir.path() / "missing_dir" / "r.json";
  EXPECT_EQ(run(cfg, std::cerr).exit_code, kIo);
}

}  // namespace
}  // namespace cjgsvd::cli
