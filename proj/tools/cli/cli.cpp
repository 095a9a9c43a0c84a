#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cjgsvd/error.hpp"
#include "cjgsvd/matrix_market.hpp"
#include "cjgsvd/oracle.hpp"
#include "cjgsvd/solver.hpp"
#include "cjgsvd/trace.hpp"

namespace cjgsvd::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kSolverSeedSalt = 0x9e3779b97f4a7c15ULL;

Weights parse_weights(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--weights: '" + item + "' is not a number");
    }
  }
  if (v.size() != 4) throw UsageError("--weights expects four values g,z,e,x");
  return {v[0], v[1], v[2], v[3]};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* mode_name(SolveMode m) {
  switch (m) {
    case SolveMode::dense_cholesky: return "dense";
    case SolveMode::cg: return "cg";
    case SolveMode::lsqr: return "lsqr";
  }
  return "?";
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json quintuple_row(const RitzQuintuple& q) {
  return {{"c", q.c_hat},
          {"s", q.s_hat},
          {"sigma", number_or_null(q.sigma_hat)},
          {"sigma_infinite", q.sigma_infinite},
          {"residual", q.residual_norm}};
}

json iteration_rows(const SolverReport& r) {
  json rows = json::array();
  for (std::size_t k = 0; k < r.per_iteration.size(); ++k) {
    const auto& it = r.per_iteration[k];
    rows.push_back({{"k", k},
                    {"ritz_in_interval", it.ritz_in_interval},
                    {"max_residual", it.max_residual},
                    {"converged", it.converged_count}});
  }
  return rows;
}

void write_history(const std::filesystem::path& path, const SolverReport& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "iteration,in_interval,converged,max_residual\n";
  out.precision(17);
  for (std::size_t k = 0; k < r.per_iteration.size(); ++k) {
    const auto& it = r.per_iteration[k];
    out << k << ',' << it.ritz_in_interval.size() << ',' << it.converged_count << ','
        << it.max_residual << '\n';
  }
}

void write_vectors(const std::filesystem::path& dir, const MatrixPair& pair,
                   const std::vector<RitzQuintuple>& qs) {
  std::filesystem::create_directories(dir);
  DenseMatrix u(pair.a.rows(), qs.size());
  DenseMatrix v(pair.b.rows(), qs.size());
  DenseMatrix x(pair.n(), qs.size());
  for (std::size_t j = 0; j < qs.size(); ++j) {
    u.set_column(j, qs[j].u_hat);
    v.set_column(j, qs[j].v_hat);
    x.set_column(j, qs[j].x_hat);
  }
  write_matrix_market_array(dir / "u.mtx", u);
  write_matrix_market_array(dir / "v.mtx", v);
  write_matrix_market_array(dir / "x.mtx", x);
}

json oracle_section(const MatrixPair& pair, const Interval& iv,
                    const std::vector<RitzQuintuple>& qs) {
  const GsvdReference ref = dense_gsvd(pair);
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < ref.n(); ++i)
    if (ref.c[i] >= kDegenerateThreshold && ref.s[i] >= kDegenerateThreshold &&
        iv.contains(ref.c[i]))
      inside.push_back(i);
  json out;
  out["n_gv"] = inside.size();
  json values = json::array();
  for (auto i : inside) values.push_back({{"c", ref.c[i]}, {"s", ref.s[i]}});
  out["values"] = values;
  out["count_match"] = inside.size() == qs.size();
  if (inside.size() == qs.size()) {
    const auto h = h_operator(pair);
    double max_chi = 0.0;
    double max_sin = 0.0;
    for (std::size_t r = 0; r < qs.size(); ++r) {
      const std::size_t i = inside[r];
      max_chi = std::max(max_chi, chordal_squared(qs[r].c_hat, qs[r].s_hat, ref.c[i], ref.s[i]));
      max_sin = std::max(max_sin, h_angle(qs[r].x_hat, ref.x_full.column(i), h).sin);
    }
    out["max_chordal"] = max_chi;
    out["max_sin_h_angle"] = max_sin;
  }
  return out;
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Generalized singular values of a sparse pair (A, B) inside [cmin, cmax]"};
  app.option_defaults()->always_capture_default();
  RunConfig cfg;
  std::string a_path, b_path, gen_b, weights, mode = "auto";
  std::optional<std::size_t> degree;
  std::optional<double> multiplier;
  std::string report, vectors, history;

  app.add_option("--a", a_path, "Matrix Market file with A")->required();
  auto* b_opt = app.add_option("--b", b_path, "Matrix Market file with B");
  auto* g_opt = app.add_option("--gen-b", gen_b, "Generate B: b0 (tridiag 1,3,1) or b1 (first difference)")
                    ->check(CLI::IsMember({"b0", "b1"}));
  b_opt->excludes(g_opt);
  app.add_option("--cmin", cfg.c_min, "Lower end of the target interval")->required();
  app.add_option("--cmax", cfg.c_max, "Upper end of the target interval")->required();
  auto* d_opt = app.add_option("--d", degree, "Explicit series degree");
  auto* dm_opt = app.add_option("--D", multiplier, "Degree multiplier in [1, 10]");
  d_opt->excludes(dm_opt);
  app.add_option("--mu", cfg.mu, "Dimension factor, p = ceil(mu * H_M)");
  app.add_option("--samples", cfg.samples, "Rademacher probes for the trace estimate")
      ->check(CLI::PositiveNumber);
  app.add_option("--weights", weights, "Weights gamma,zeta,eta,xi (default 1,1,1,1)");
  app.add_option("--mode", mode, "Solver backend")->check(CLI::IsMember({"dense", "cg", "lsqr", "auto"}));
  app.add_option("--solve-tol", cfg.solve_tol, "Relative tolerance of iterative solves");
  app.add_option("--tol", cfg.tol, "Residual tolerance of the stopping test");
  app.add_option("--max-iters", cfg.max_iters, "Maximum filter applications");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--report", report, "Write the JSON report here (default: stdout)");
  app.add_option("--vectors", vectors, "Directory for u.mtx, v.mtx, x.mtx");
  app.add_option("--history", history, "CSV of per-iteration residual maxima");
  app.add_flag("--oracle-check", cfg.oracle_check, "Compare against a dense reference GSVD");
  app.add_option("--p", cfg.p, "Use this subspace dimension instead of the trace estimate");
  app.add_option("--kappa", cfg.kappa, "Condition number of [A; B] for the advisory sample bound");
  app.add_flag("--quiet", cfg.quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.a_path = a_path;
  if (!b_path.empty()) cfg.b_path = b_path;
  if (!gen_b.empty()) cfg.gen_b = gen_b == "b0" ? BKind::b0 : BKind::b1;
  if (!cfg.b_path && !cfg.gen_b) throw UsageError("one of --b or --gen-b is required");
  if (degree.has_value() == multiplier.has_value())
    throw UsageError("exactly one of --d or --D is required");
  cfg.degree = degree;
  cfg.degree_multiplier = multiplier;
  if (multiplier && !(*multiplier >= 1.0 && *multiplier <= 10.0))
    throw UsageError("--D must lie in [1, 10]");
  if (!(cfg.c_min > 0.0 && cfg.c_min < cfg.c_max && cfg.c_max < 1.0))
    throw UsageError("--cmin/--cmax must satisfy 0 < cmin < cmax < 1");
  if (!(cfg.mu > 0.0)) throw UsageError("--mu must be positive");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (!(cfg.solve_tol > 0.0)) throw UsageError("--solve-tol must be positive");
  if (cfg.max_iters == 0) throw UsageError("--max-iters must be positive");
  if (cfg.p && *cfg.p == 0) throw UsageError("--p must be positive");
  if (cfg.kappa && !(*cfg.kappa >= 1.0)) throw UsageError("--kappa must be at least 1");
  if (!weights.empty()) cfg.weights = parse_weights(weights);
  if (mode == "dense") cfg.mode = ModeChoice::dense;
  else if (mode == "cg") cfg.mode = ModeChoice::cg;
  else if (mode == "lsqr") cfg.mode = ModeChoice::lsqr;
  if (!report.empty()) cfg.report_path = report;
  if (!vectors.empty()) cfg.vectors_path = vectors;
  if (!history.empty()) cfg.history_path = history;
  return cfg;
}

std::size_t resolved_degree(const RunConfig& config, const Interval& interval) {
  if (config.degree) return *config.degree;
  if (config.degree_multiplier) return select_degree(interval, *config.degree_multiplier);
  throw UsageError("exactly one of --d or --D is required");
}

RunResult run(const RunConfig& config, const MatrixPair& pair, std::ostream& log) {
  RunResult result;
  json& rep = result.report;
  rep["schema"] = 1;
  rep["timestamp"] = utc_timestamp();
  rep["problem"] = {{"n", pair.n()},
                    {"m1", pair.a.rows()},
                    {"m2", pair.b.rows()},
                    {"nnz_a", pair.a.nnz()},
                    {"nnz_b", pair.b.nnz()},
                    {"one_norm_a", pair.one_norm_a},
                    {"one_norm_b", pair.one_norm_b}};
  const auto& w = config.weights;
  rep["config"] = {{"cmin", config.c_min},
                   {"cmax", config.c_max},
                   {"mu", config.mu},
                   {"samples", config.samples},
                   {"weights", {w.gamma, w.zeta, w.eta, w.xi}},
                   {"solve_tol", config.solve_tol},
                   {"tol", config.tol},
                   {"max_iters", config.max_iters},
                   {"seed", config.seed}};
  if (config.degree_multiplier) rep["config"]["D"] = *config.degree_multiplier;

  auto fail = [&](int code, const std::string& stage, const std::string& what) {
    result.exit_code = code;
    result.message = stage + ": " + what;
    rep["status"] = "error";
    rep["error"] = {{"stage", stage}, {"message", what}};
    return result;
  };

  Interval interval;
  ChebFilter filter;
  try {
    interval = make_interval(config.c_min, config.c_max, SpectralMap(w));
    filter = make_filter(interval, resolved_degree(config, interval));
  } catch (const Error& e) {
    return fail(kUsage, "filter", e.what());
  }
  rep["degree"] = filter.d;
  if (config.mu < 1.1 && !config.quiet)
    log << "warning: mu = " << config.mu << " is below the recommended 1.1\n";

  BackendOptions opts;
  opts.weights = w;
  opts.solve_tol = config.solve_tol;
  switch (config.mode) {
    case ModeChoice::automatic:
      opts.mode = pair.n() <= kDenseCeiling ? SolveMode::dense_cholesky : SolveMode::cg;
      break;
    case ModeChoice::dense: opts.mode = SolveMode::dense_cholesky; break;
    case ModeChoice::cg: opts.mode = SolveMode::cg; break;
    case ModeChoice::lsqr: opts.mode = SolveMode::lsqr; break;
  }
  rep["config"]["mode"] = mode_name(opts.mode);

  std::optional<SpdBackend> backend;
  try {
    backend.emplace(make_backend(pair, opts));
  } catch (const InvalidArgument& e) {
    return fail(kUsage, "backend", e.what());
  } catch (const Error& e) {
    return fail(kNumerical, "backend", e.what());
  }

  std::size_t p = 0;
  if (config.p) {
    p = std::min(*config.p, pair.n());
    rep["trace"] = nullptr;
  } else {
    try {
      const TraceEstimate est = estimate_trace(*backend, filter, config.samples, config.seed);
      rep["trace"] = {{"h_m", est.h_m}, {"samples", est.m}, {"nls", backend->nls()}};
      rep["estimated_ngv"] = est.h_m;
      if (!config.quiet) log << "trace estimate H_M = " << est.h_m << " (d = " << filter.d << ")\n";
      if (config.kappa && est.h_m > 0.0)
        rep["trace"]["advisory_samples"] = sample_bound(0.1, 0.01, *config.kappa, est.h_m);
      p = std::min(select_dimension(est.h_m, config.mu), pair.n());
    } catch (const NonPositiveEstimate& e) {
      if (!config.quiet) log << "empty interval: " << e.what() << '\n';
      rep["status"] = "empty";
      rep["p"] = 0;
      rep["iterations"] = 0;
      rep["nls"] = backend->nls();
      rep["converged"] = json::array();
      return result;
    } catch (const Error& e) {
      return fail(kNumerical, "trace estimate", e.what());
    }
  }
  rep["p"] = p;

  SolverConfig sc;
  sc.interval = interval;
  sc.filter = filter;
  sc.p = p;
  sc.tol = config.tol;
  sc.max_iters = config.max_iters;
  sc.seed = config.seed ^ kSolverSeedSalt;

  std::optional<SolverReport> solved;
  try {
    solved = solve(pair, *backend, sc);
    rep["status"] = "converged";
  } catch (const Stagnation& e) {
    solved = e.report();
    fail(kStagnation, "solve", e.what());
    rep["status"] = "stagnation";
  } catch (const MaxIterationsExceeded& e) {
    solved = e.report();
    fail(kMaxIterations, "solve", e.what());
    rep["status"] = "max_iterations";
  } catch (const RankDeficient& e) {
    return fail(kRankDeficient, "solve",
                std::string(e.what()) + " (try a smaller p or check that the pair is regular)");
  } catch (const Error& e) {
    return fail(kNumerical, "solve", e.what());
  }

  const SolverReport& r = *solved;
  rep["iterations"] = r.iterations;
  rep["solver_nls"] = r.nls;
  rep["nls"] = backend->nls();
  rep["per_iteration"] = iteration_rows(r);
  json rows = json::array();
  for (const auto& q : r.converged) rows.push_back(quintuple_row(q));
  rep["converged"] = rows;
  if (result.exit_code == kOk) {
    if (!config.quiet)
      log << "converged: " << r.converged.size() << " values, k = " << r.iterations
          << ", NLS = " << backend->nls() << '\n';
    if (config.oracle_check) {
      try {
        rep["oracle"] = pair.n() <= kDenseCeiling
                            ? oracle_section(pair, interval, r.converged)
                            : json(nullptr);
      } catch (const Error& e) {
        return fail(kNumerical, "oracle", e.what());
      }
    }
  }
  // Output files; failures here propagate to the caller as I/O errors.
  if (config.history_path) write_history(*config.history_path, r);
  if (config.vectors_path && result.exit_code == kOk)
    write_vectors(*config.vectors_path, pair, r.converged);
  return result;
}

RunResult run(const RunConfig& config, std::ostream& log) {
  RunResult result;
  std::optional<MatrixPair> pair;
  try {
    SparseMatrix a = read_matrix_market(config.a_path);
    SparseMatrix b = config.b_path ? read_matrix_market(*config.b_path) : gen_b(*config.gen_b, a.cols());
    pair.emplace(make_pair(std::move(a), std::move(b)));
  } catch (const DimensionMismatch& e) {
    result.exit_code = kUsage;
    result.message = std::string("input: ") + e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kIo;
    result.message = std::string("input: ") + e.what();
    return result;
  }

  try {
    result = run(config, *pair, log);
  } catch (const std::exception& e) {
    // Writing history or vector files.
    result.exit_code = kIo;
    result.message = std::string("output: ") + e.what();
    return result;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (config.report_path) {
    std::ofstream out(*config.report_path);
    if (!out || !(out << text)) {
      result.exit_code = kIo;
      result.message = "output: cannot write " + config.report_path->string();
    }
  } else {
    std::cout << text;
  }
  return result;
}

}  // namespace cjgsvd::cli
