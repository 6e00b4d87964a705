// Experiment harness: builds problems from flat-key configurations, resolves
// schedule plans (preset name XOR explicit constants), runs the solver under
// an iteration or wall-clock budget, and emits trace.csv / summary.json /
// rate.json / index.json artifacts. The command-line tool is a thin wrapper
// over the cmd_* functions here, which are also exercised directly by tests.
//
// Configuration keys (all optional unless marked required):
//   problem                 required: matrix-game | quadratic-saddle |
//                           dictionary-learning | robust-classification
//   mode                    required for run/rate: lmo-lmo | lmo-po | po-lmo
//   seed                    required everywhere (integer)
//   preset                  regime name (nc-c, nc-sc, nc-c+scy, nc-sc+scy,
//                           c-c, c-sc, c-c+scy, c-sc+scy) or a horizon
//                           baseline (r-pdcg, cg-rpga); XOR schedule.*
//   preset.smoothing_c      override the preset smoothing constant (> 0)
//   preset.ramp             override the po-lmo ramp coefficient (> 0)
//   schedule.a              explicit step exponent (XOR preset)
//   schedule.b              explicit smoothing exponent (default 0)
//   schedule.C              explicit smoothing constant (default 0 = off)
//   schedule.A              po-lmo ramp coefficient (default 1)
//   schedule.s              po-lmo scale (default 0.2)
//   budget.iterations       XOR budget.seconds (exactly one for run)
//   cadence                 trace row cadence (default 10)
//   sigma                   proximal-gap scale (default: largest step size)
//   verify.dual_ascent      assert per-step dual improvement (default false)
//   verify.feasibility      assert iterate feasibility (default false)
//   game.rows, game.cols    matrix game shape (default 10x10, random payoff)
//   game.payoff             path to a payoff matrix file (overrides shape)
//   qs.dim                  quadratic saddle dimension (default 6)
//   dl.data                 directory produced by `generate`
//   dl.m,n,p,l,q,n_prime    synthetic sizes (default: benchmark sizes)
//   dl.delta, dl.radius, dl.y_cap    problem constants (1e-4, 5, 1)
//   rc.data                 LIBSVM file path (else synthetic)
//   rc.n, rc.d, rc.k        synthetic shape (default 50, 20, 3)
//   rc.radius, rc.lambda_prime, rc.rho   constants (10, 10, 1)
//   rc.domain               simplex | ball (default simplex)
//   rate.grid               required for rate: iteration grid (>= 10 points)
//   rate.column             fitted column (default avg_gap_y)
//   rate.theory             required for rate: theoretical exponent
//   rate.band               required for rate: [lo, hi] acceptance band
//   rate.window             trailing points used in the fit (default: all)
//   sweep.<key>             sweep axis: list of values substituted for <key>
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mmx/config.hpp"
#include "mmx/matrix_io.hpp"
#include "mmx/presets.hpp"
#include "mmx/problems/dictionary_learning.hpp"
#include "mmx/problems/matrix_game.hpp"
#include "mmx/problems/quadratic_saddle.hpp"
#include "mmx/problems/robust_classification.hpp"
#include "mmx/solver.hpp"
#include "mmx/trace.hpp"

namespace mmx {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Problem construction
// ---------------------------------------------------------------------------

inline DictionaryLearning load_dictionary_learning(const std::string& dir,
                                                   double delta, double radius,
                                                   double y_cap) {
  namespace fs = std::filesystem;
  auto file = [&dir](const char* name) {
    return (fs::path(dir) / name).string();
  };
  Matrix A = read_matrix(file("A.mmx"));
  Matrix A_prime = read_matrix(file("A_prime.mmx"));
  Matrix C_tilde = read_matrix(file("C_tilde.mmx"));
  Matrix D0 = read_matrix(file("D0.mmx"));
  Matrix C0 = read_matrix(file("C0.mmx"));
  Point x0 = Point::concat({Point::of_matrix(C0), Point::of_matrix(D0)});
  return DictionaryLearning(std::move(A), std::move(A_prime),
                            std::move(C_tilde), delta, radius, y_cap,
                            std::move(x0));
}

inline std::shared_ptr<PayoffProblem> build_problem(const Config& config,
                                                    std::uint64_t seed) {
  const std::string family = config.get_string("problem");
  if (family == "matrix-game") {
    if (config.has("game.payoff")) {
      return std::make_shared<MatrixGame>(
          read_matrix(config.get_string("game.payoff")));
    }
    const long rows = config.get_long("game.rows", 10);
    const long cols = config.get_long("game.cols", 10);
    return std::make_shared<MatrixGame>(
        MatrixGame::random(static_cast<Index>(rows),
                           static_cast<Index>(cols), seed));
  }
  if (family == "quadratic-saddle") {
    const long dim = config.get_long("qs.dim", 6);
    return std::make_shared<QuadraticSaddle>(
        QuadraticSaddle::reference(static_cast<Index>(dim), seed));
  }
  if (family == "dictionary-learning") {
    const double delta = config.get_double("dl.delta", 1e-4);
    const double radius = config.get_double("dl.radius", 5.0);
    const double y_cap = config.get_double("dl.y_cap", 1.0);
    if (config.has("dl.data")) {
      return std::make_shared<DictionaryLearning>(load_dictionary_learning(
          config.get_string("dl.data"), delta, radius, y_cap));
    }
    DictionaryLearningSizes sizes = DictionaryLearningSizes::benchmark();
    sizes.m = static_cast<Index>(config.get_long("dl.m", sizes.m));
    sizes.n = static_cast<Index>(config.get_long("dl.n", sizes.n));
    sizes.p = static_cast<Index>(config.get_long("dl.p", sizes.p));
    sizes.l = static_cast<Index>(config.get_long("dl.l", sizes.l));
    sizes.q = static_cast<Index>(config.get_long("dl.q", sizes.q));
    sizes.n_prime =
        static_cast<Index>(config.get_long("dl.n_prime", sizes.n_prime));
    return std::make_shared<DictionaryLearning>(
        make_dictionary_learning(sizes, seed, delta, radius, y_cap));
  }
  if (family == "robust-classification") {
    const double radius = config.get_double("rc.radius", 10.0);
    const double lambda_prime = config.get_double("rc.lambda_prime", 10.0);
    const double rho = config.get_double("rc.rho", 1.0);
    const std::string domain_name = config.get_string("rc.domain", "simplex");
    RobustClassification::DualDomain domain;
    if (domain_name == "simplex") {
      domain = RobustClassification::DualDomain::kSimplex;
    } else if (domain_name == "ball") {
      domain = RobustClassification::DualDomain::kBall;
    } else {
      throw ConfigError("rc.domain must be 'simplex' or 'ball', got '" +
                        domain_name + "'");
    }
    ClassificationData data =
        config.has("rc.data")
            ? read_libsvm(config.get_string("rc.data"))
            : rc_synthetic(static_cast<Index>(config.get_long("rc.n", 50)),
                           static_cast<Index>(config.get_long("rc.d", 20)),
                           static_cast<int>(config.get_long("rc.k", 3)),
                           seed);
    return std::make_shared<RobustClassification>(
        std::move(data), radius, lambda_prime, domain, rho);
  }
  throw ConfigError(
      "unknown problem '" + family +
      "' (expected matrix-game, quadratic-saddle, dictionary-learning, or "
      "robust-classification)");
}

// ---------------------------------------------------------------------------
// Plan resolution: preset name XOR explicit schedule constants
// ---------------------------------------------------------------------------

inline SolverPlan resolve_plan(const PayoffProblem& problem,
                               const Config& config) {
  const OracleMode mode = parse_oracle_mode(config.get_string("mode"));
  const bool has_preset = config.has("preset");
  const bool has_explicit = !config.keys_with_prefix("schedule.").empty();
  if (has_preset && has_explicit) {
    throw ConfigError(
        "give either a preset name or explicit schedule.* constants, not "
        "both");
  }
  if (!has_preset && !has_explicit) {
    throw ConfigError("missing schedule: set 'preset' or 'schedule.a'");
  }

  if (has_preset) {
    const std::string name = config.get_string("preset");
    if (name == "r-pdcg" || name == "cg-rpga") {
      if (!config.has("budget.iterations")) {
        throw ConfigError("horizon preset '" + name +
                          "' needs budget.iterations to fix its horizon");
      }
      const long horizon = config.get_long("budget.iterations");
      if (horizon < 1) {
        throw ConfigError("horizon preset '" + name +
                          "' needs budget.iterations >= 1");
      }
      SolverPlan plan =
          (name == "r-pdcg") ? horizon_rpdcg(horizon) : horizon_cg_rpga(horizon);
      if (plan.mode != mode) {
        throw ConfigError("preset '" + name + "' runs in mode " +
                          std::string(oracle_mode_name(plan.mode)) +
                          ", but the config says " +
                          std::string(oracle_mode_name(mode)));
      }
      return plan;
    }
    PresetOverrides overrides;
    if (config.has("preset.smoothing_c")) {
      overrides.smoothing_c = config.get_double("preset.smoothing_c");
    }
    if (config.has("preset.ramp")) {
      overrides.ramp = config.get_double("preset.ramp");
    }
    return plan_from_preset(problem, parse_regime(name), mode, overrides);
  }

  // Explicit constants.
  const double a = config.get_double("schedule.a");
  const double b = config.get_double("schedule.b", 0.0);
  const double c = config.get_double("schedule.C", 0.0);
  SolverPlan plan;
  plan.mode = mode;
  plan.preset_name = "explicit";
  plan.smoothing =
      c > 0.0 ? SmoothingSchedule(c, b) : SmoothingSchedule::off();
  plan.constants["a"] = a;
  plan.constants["b"] = b;
  plan.constants["C"] = c;
  if (mode == OracleMode::kPoLmo) {
    const double scale = config.get_double("schedule.s", 0.2);
    const double ramp = config.get_double("schedule.A", 1.0);
    plan.step = StepSchedule::inverse_sum(
        scale, ramp, a, b, problem.lipschitz_xx(), problem.lipschitz_yx(), c,
        problem.concavity_mu());
    const double margin = inverse_sum_margin_infimum(
        plan.step, plan.smoothing, problem.lipschitz_xx(),
        problem.lipschitz_yx(), problem.concavity_mu(),
        problem.y_set().strong_convexity_alpha() > 0.0);
    if (!(margin > 0.0)) {
      throw ConfigError(
          "explicit po-lmo schedule leaves no positive descent margin for " +
          problem.describe() + " (infimum " + std::to_string(margin) +
          "); increase schedule.A or schedule.C");
    }
    plan.constants["s"] = scale;
    plan.constants["A"] = ramp;
    plan.constants["margin"] = margin;
  } else {
    if (config.has("schedule.A") || config.has("schedule.s")) {
      throw ConfigError(
          "schedule.A and schedule.s apply only to mode po-lmo");
    }
    plan.step = StepSchedule::power(a);
  }
  return plan;
}

inline RunOptions resolve_run_options(const Config& config) {
  RunOptions options;
  const bool by_iters = config.has("budget.iterations");
  const bool by_seconds = config.has("budget.seconds");
  if (by_iters == by_seconds) {
    throw ConfigError(
        "set exactly one of budget.iterations and budget.seconds");
  }
  if (by_iters) options.iterations = config.get_long("budget.iterations");
  if (by_seconds) options.seconds = config.get_double("budget.seconds");
  options.cadence = config.get_long("cadence", 10);
  if (config.has("sigma")) options.sigma = config.get_double("sigma");
  options.verify_dual_ascent = config.get_bool("verify.dual_ascent", false);
  options.verify_feasibility = config.get_bool("verify.feasibility", false);
  return options;
}

// ---------------------------------------------------------------------------
// Shared artifact helpers
// ---------------------------------------------------------------------------

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
  write_file_bytes(path, text);
}

inline Json row_to_json(const TraceRow& row) {
  Json j{{"iter", row.iter},
         {"wall_ms", row.wall_ms},
         {"tau", row.tau},
         {"beta", row.beta},
         {"gamma", row.gamma},
         {"objective", row.objective},
         {"gap_x", row.gap_x},
         {"gap_y", row.gap_y},
         {"avg_gap_x", row.avg_gap_x},
         {"avg_gap_y", row.avg_gap_y}};
  if (row.duality_gap) j["duality_gap"] = *row.duality_gap;
  if (row.gap_y_cert) j["gap_y_cert"] = *row.gap_y_cert;
  return j;
}

inline std::uint64_t required_seed(const Config& config) {
  if (!config.has("seed")) {
    throw ConfigError("missing required config key 'seed'");
  }
  const long seed = config.get_long("seed");
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  return static_cast<std::uint64_t>(seed);
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir +
                  "': " + ec.message());
  }
}

// Fetches the value of a named trace column from a row; optional columns
// raise a capability error when the run did not track them.
inline double trace_column(const TraceRow& row, const std::string& column) {
  if (column == "objective") return row.objective;
  if (column == "gap_x") return row.gap_x;
  if (column == "gap_y") return row.gap_y;
  if (column == "avg_gap_x") return row.avg_gap_x;
  if (column == "avg_gap_y") return row.avg_gap_y;
  if (column == "duality_gap") {
    if (!row.duality_gap) {
      throw CapabilityError(
          "rate.column = duality_gap needs a convex-in-x problem with exact "
          "best responses on both blocks");
    }
    return *row.duality_gap;
  }
  if (column == "gap_y_cert") {
    if (!row.gap_y_cert) {
      throw CapabilityError(
          "rate.column = gap_y_cert is only tracked when gap_y is a "
          "certified estimate");
    }
    return *row.gap_y_cert;
  }
  throw ConfigError("unknown rate.column '" + column + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run: one experiment -> trace.csv + summary.json
// ---------------------------------------------------------------------------

struct RunArtifacts {
  RunResult result;
  SolverPlan plan;
  Json summary;
  std::string trace_path;
  std::string summary_path;
};

inline RunArtifacts cmd_run(const Config& config, const std::string& out_dir,
                            const RunOptions* extra = nullptr) {
  const std::uint64_t seed = detail::required_seed(config);
  auto problem = build_problem(config, seed);
  SolverPlan plan = resolve_plan(*problem, config);
  RunOptions options = extra ? *extra : resolve_run_options(config);

  RunArtifacts artifacts;
  artifacts.plan = plan;
  artifacts.result = run(*problem, plan, options);

  detail::ensure_directory(out_dir);
  namespace fs = std::filesystem;
  artifacts.trace_path = (fs::path(out_dir) / "trace.csv").string();
  artifacts.summary_path = (fs::path(out_dir) / "summary.json").string();
  write_trace_csv(artifacts.trace_path, artifacts.result.rows);

  Json constants = Json::object();
  for (const auto& [key, value] : plan.constants) constants[key] = value;
  Json summary{
      {"problem", config.get_string("problem")},
      {"mode", oracle_mode_name(plan.mode)},
      {"preset", plan.preset_name},
      {"constants", constants},
      {"schedule_form", plan.step.form() == StepSchedule::Form::kPower
                            ? "power"
                            : (plan.step.form() == StepSchedule::Form::kConstant
                                   ? "constant"
                                   : "inverse-sum")},
      {"seed", seed},
      {"sigma", artifacts.result.sigma},
      {"iterations_completed", artifacts.result.iterations},
      {"solver_seconds", artifacts.result.solver_seconds},
      {"initial", detail::row_to_json(artifacts.result.rows.front())},
      {"final", detail::row_to_json(artifacts.result.final_row())},
      {"config", config.echo()},
  };
  artifacts.summary = summary;
  detail::write_text_file(artifacts.summary_path, summary.dump(2) + "\n");
  return artifacts;
}

// ---------------------------------------------------------------------------
// generate: synthetic dictionary-learning data -> five matrices + manifest
// ---------------------------------------------------------------------------

struct GenerateArtifacts {
  Json manifest;
  std::vector<std::string> files;
};

inline GenerateArtifacts cmd_generate(const Config& config,
                                      const std::string& out_dir) {
  const std::uint64_t seed = detail::required_seed(config);
  DictionaryLearningSizes sizes = DictionaryLearningSizes::benchmark();
  sizes.m = static_cast<Index>(config.get_long("dl.m", sizes.m));
  sizes.n = static_cast<Index>(config.get_long("dl.n", sizes.n));
  sizes.p = static_cast<Index>(config.get_long("dl.p", sizes.p));
  sizes.l = static_cast<Index>(config.get_long("dl.l", sizes.l));
  sizes.q = static_cast<Index>(config.get_long("dl.q", sizes.q));
  sizes.n_prime =
      static_cast<Index>(config.get_long("dl.n_prime", sizes.n_prime));

  Rng rng(seed);
  DictionaryLearningData data =
      dl_generate(sizes.m, sizes.n, sizes.p, sizes.l, sizes.q, sizes.n_prime,
                  rng);

  detail::ensure_directory(out_dir);
  namespace fs = std::filesystem;
  GenerateArtifacts artifacts;
  auto save = [&](const char* name, const Matrix& matrix) {
    const std::string path = (fs::path(out_dir) / name).string();
    write_matrix(path, matrix);
    artifacts.files.push_back(path);
  };
  save("A.mmx", data.A);
  save("A_prime.mmx", data.A_prime);
  save("C_tilde.mmx", data.C_tilde);
  save("D0.mmx", data.D0);
  save("C0.mmx", data.C0);

  artifacts.manifest = Json{
      {"seed", seed},
      {"sizes",
       Json{{"m", sizes.m},
            {"n", sizes.n},
            {"p", sizes.p},
            {"l", sizes.l},
            {"q", sizes.q},
            {"n_prime", sizes.n_prime}}},
      {"files", Json{{"A", "A.mmx"},
                     {"A_prime", "A_prime.mmx"},
                     {"C_tilde", "C_tilde.mmx"},
                     {"D0", "D0.mmx"},
                     {"C0", "C0.mmx"}}},
  };
  detail::write_text_file((fs::path(out_dir) / "manifest.json").string(),
                          artifacts.manifest.dump(2) + "\n");
  return artifacts;
}

// ---------------------------------------------------------------------------
// rate: anytime run + trailing log-log fit against a tolerance band
// ---------------------------------------------------------------------------

struct RateArtifacts {
  RateEstimate estimate{0.0, 0.0, 0};
  bool pass = false;
  Json report;
  std::string report_path;
};

inline RateArtifacts cmd_rate(const Config& config,
                              const std::string& out_dir) {
  if (config.has("budget.iterations") || config.has("budget.seconds")) {
    throw ConfigError(
        "rate derives its iteration budget from rate.grid; remove budget.*");
  }
  std::vector<long> grid = config.get_long_list("rate.grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() || grid.front() < 1) {
    throw ConfigError("rate.grid must list iteration counts >= 1");
  }
  const std::string column = config.get_string("rate.column", "avg_gap_y");
  const double theory = config.get_double("rate.theory");
  const std::vector<double> band = config.get_double_list("rate.band");
  if (band.size() != 2 || !(band[0] <= band[1])) {
    throw ConfigError("rate.band must be [lo, hi] with lo <= hi");
  }
  const long window_cfg =
      config.get_long("rate.window", static_cast<long>(grid.size()));
  if (window_cfg < 1 || window_cfg > static_cast<long>(grid.size())) {
    throw ConfigError("rate.window must be between 1 and the grid size");
  }

  const std::uint64_t seed = detail::required_seed(config);
  auto problem = build_problem(config, seed);
  SolverPlan plan = resolve_plan(*problem, config);
  RunOptions options;
  options.iterations = grid.back();
  options.cadence = config.get_long("cadence", 10);
  options.extra_emit = grid;
  if (config.has("sigma")) options.sigma = config.get_double("sigma");

  RunResult result = run(*problem, plan, options);

  // One anytime trace supplies every grid point.
  std::vector<std::pair<double, double>> series;
  series.reserve(grid.size());
  std::size_t cursor = 0;
  for (long t : grid) {
    while (cursor < result.rows.size() && result.rows[cursor].iter < t) {
      ++cursor;
    }
    if (cursor == result.rows.size() || result.rows[cursor].iter != t) {
      throw NumericalError("trace is missing grid point t = " +
                           std::to_string(t));
    }
    series.emplace_back(static_cast<double>(t),
                        detail::trace_column(result.rows[cursor], column));
  }

  RateArtifacts artifacts;
  artifacts.estimate =
      estimate_rate(series, static_cast<std::size_t>(window_cfg));
  artifacts.pass = artifacts.estimate.slope >= band[0] &&
                   artifacts.estimate.slope <= band[1];

  detail::ensure_directory(out_dir);
  namespace fs = std::filesystem;
  write_trace_csv((fs::path(out_dir) / "trace.csv").string(), result.rows);

  Json points = Json::array();
  for (const auto& [t, g] : series) {
    points.push_back(Json{{"iter", static_cast<long>(t)}, {"value", g}});
  }
  artifacts.report = Json{
      {"column", column},
      {"grid", grid},
      {"points", points},
      {"slope", artifacts.estimate.slope},
      {"stderr", artifacts.estimate.stderr_slope},
      {"window", window_cfg},
      {"theory", theory},
      {"band", band},
      {"pass", artifacts.pass},
      {"seed", seed},
      {"config", config.echo()},
  };
  artifacts.report_path = (fs::path(out_dir) / "rate.json").string();
  detail::write_text_file(artifacts.report_path,
                          artifacts.report.dump(2) + "\n");
  return artifacts;
}

// ---------------------------------------------------------------------------
// sweep: cartesian parameter grid on a bounded worker pool
// ---------------------------------------------------------------------------

struct SweepArtifacts {
  Json index;
  std::string index_path;
  long cells = 0;
  long failed = 0;
};

inline long resolve_worker_count(long requested, long cells) {
  long workers = requested;
  if (workers <= 0) {
    if (const char* env = std::getenv("MMX_WORKERS")) {
      try {
        workers = std::stol(env);
      } catch (const std::exception&) {
        throw ConfigError("MMX_WORKERS must be an integer, got '" +
                          std::string(env) + "'");
      }
    }
  }
  if (workers <= 0) {
    workers = static_cast<long>(std::thread::hardware_concurrency());
  }
  if (workers < 1) workers = 1;
  return std::min(workers, std::max<long>(cells, 1));
}

inline SweepArtifacts cmd_sweep(const Config& config,
                                const std::string& out_dir,
                                long requested_workers = 0) {
  // Axes: sweep.<key> = [v1, v2, ...]; cells are the cartesian product in
  // key-sorted order with the last key varying fastest.
  std::vector<std::string> axis_keys = config.keys_with_prefix("sweep.");
  if (axis_keys.empty()) {
    throw ConfigError("sweep needs at least one sweep.<key> axis");
  }
  struct Axis {
    std::string target;
    std::vector<Json> values;
  };
  std::vector<Axis> axes;
  long cells = 1;
  for (const std::string& key : axis_keys) {
    const Json& raw = config.raw(key);
    if (!raw.is_array() || raw.empty()) {
      throw ConfigError("sweep axis '" + key + "' must be a nonempty list");
    }
    Axis axis;
    axis.target = key.substr(std::string("sweep.").size());
    if (axis.target.empty()) {
      throw ConfigError("sweep axis '" + key + "' names no target key");
    }
    for (const Json& value : raw) axis.values.push_back(value);
    cells *= static_cast<long>(axis.values.size());
    axes.push_back(std::move(axis));
  }

  Config base = config;
  for (const std::string& key : axis_keys) base.erase(key);
  const bool rate_cells = base.has("rate.grid");

  detail::ensure_directory(out_dir);
  namespace fs = std::filesystem;

  struct Cell {
    Config config;
    Json overrides;
    std::string dir_name;
  };
  std::vector<Cell> plan_cells;
  plan_cells.reserve(static_cast<std::size_t>(cells));
  for (long index = 0; index < cells; ++index) {
    Cell cell;
    cell.config = base;
    cell.overrides = Json::object();
    long remainder = index;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      const long count = static_cast<long>(it->values.size());
      const Json& value = it->values[static_cast<std::size_t>(
          remainder % count)];
      remainder /= count;
      cell.config.set(it->target, value);
      cell.overrides[it->target] = value;
    }
    char name[32];
    std::snprintf(name, sizeof(name), "cell_%04ld", index);
    cell.dir_name = name;
    plan_cells.push_back(std::move(cell));
  }

  struct Outcome {
    std::string status = "ok";
    std::string error;
    bool rate_pass = true;
  };
  std::vector<Outcome> outcomes(plan_cells.size());

  const long workers = resolve_worker_count(requested_workers, cells);
  std::atomic<std::size_t> next{0};
  auto worker_loop = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan_cells.size()) return;
      const Cell& cell = plan_cells[i];
      const std::string cell_dir =
          (fs::path(out_dir) / cell.dir_name).string();
      try {
        if (rate_cells) {
          RateArtifacts rate = cmd_rate(cell.config, cell_dir);
          outcomes[i].rate_pass = rate.pass;
        } else {
          cmd_run(cell.config, cell_dir);
        }
      } catch (const std::exception& error) {
        outcomes[i].status = "error";
        outcomes[i].error = error.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
  for (std::thread& t : pool) t.join();

  SweepArtifacts artifacts;
  artifacts.cells = cells;
  Json rows = Json::array();
  for (std::size_t i = 0; i < plan_cells.size(); ++i) {
    Json row{{"dir", plan_cells[i].dir_name},
             {"overrides", plan_cells[i].overrides},
             {"status", outcomes[i].status}};
    if (outcomes[i].status != "ok") {
      row["error"] = outcomes[i].error;
      ++artifacts.failed;
    } else if (rate_cells) {
      row["rate_pass"] = outcomes[i].rate_pass;
    }
    rows.push_back(std::move(row));
  }
  artifacts.index = Json{
      {"cells", rows},
      {"cell_count", cells},
      {"failed", artifacts.failed},
      {"workers", workers},
      {"kind", rate_cells ? "rate" : "run"},
      {"config", config.echo()},
  };
  artifacts.index_path = (fs::path(out_dir) / "index.json").string();
  detail::write_text_file(artifacts.index_path,
                          artifacts.index.dump(2) + "\n");
  return artifacts;
}

// ---------------------------------------------------------------------------
// Exit-code mapping shared by the CLI and tests
// ---------------------------------------------------------------------------

inline int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const NumericalError*>(&error)) return 3;
  if (dynamic_cast<const IoError*>(&error)) return 4;
  if (dynamic_cast<const ConfigError*>(&error)) return 2;  // + capability
  return 1;
}

template <typename Fn>
int run_mapped(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code_for(error);
  }
}

}  // namespace mmx
