#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cjgsvd/filter.hpp"
#include "cjgsvd/sparse.hpp"
#include "cjgsvd/spd_backend.hpp"

namespace cjgsvd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kStagnation = 3,
  kMaxIterations = 4,
  kRankDeficient = 5,
  kNumerical = 6,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; carries the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModeChoice { automatic, dense, cg, lsqr };

struct RunConfig {
  std::filesystem::path a_path;
  std::optional<std::filesystem::path> b_path;
  std::optional<BKind> gen_b;
  double c_min = 0.0;
  double c_max = 0.0;
  std::optional<std::size_t> degree;
  std::optional<double> degree_multiplier;
  double mu = 1.1;
  std::size_t samples = 20;
  Weights weights{};
  ModeChoice mode = ModeChoice::automatic;
  double solve_tol = 1e-14;
  double tol = 1e-8;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> vectors_path;
  std::optional<std::filesystem::path> history_path;
  bool oracle_check = false;
  /// Skips the trace estimate and uses this subspace dimension.
  std::optional<std::size_t> p;
  /// Condition number of [A; B] for the advisory sample bound.
  std::optional<double> kappa;
  bool quiet = false;
};

/// Throws UsageError naming the offending flag, HelpRequested for --help.
RunConfig parse_config(int argc, const char* const* argv);

/// Explicit d, or select_degree(interval, D).
std::size_t resolved_degree(const RunConfig& config, const Interval& interval);

struct RunResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::string message;  // diagnostic for nonzero exits
};

/// Runs the pipeline on an already loaded pair.
RunResult run(const RunConfig& config, const MatrixPair& pair, std::ostream& log);

/// Loads the pair named by the config, runs the pipeline and writes the
/// report, history and vector files that were requested.
RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace cjgsvd::cli
