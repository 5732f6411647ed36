#include "dseg/bench.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace dseg {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> GridSpec::values() const {
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (min <= 0.0 || max < min) throw std::invalid_argument("bad grid range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out.push_back(log_spaced ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                             : min + f * (max - min));
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (solvers.empty()) throw std::invalid_argument("config: no solvers");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
  if (k_max < 1) throw std::invalid_argument("config: k_max must be >= 1");
  (void)grid.values();
  if (games.files.empty() && games.count < 1)
    throw std::invalid_argument("config: need at least one game");
  for (const auto& f : games.files)
    if (!fs::exists(f)) throw std::invalid_argument("config: missing game file " + f);
}

namespace {

std::string geometry_name(GameGeometry g) {
  return g == GameGeometry::SimplexProduct ? "simplex_product" : "unconstrained";
}
GameGeometry geometry_from_name(const std::string& s) {
  if (s == "simplex_product") return GameGeometry::SimplexProduct;
  if (s == "unconstrained") return GameGeometry::Unconstrained;
  throw std::invalid_argument("unknown geometry: " + s);
}
std::string own_term_name(OwnTerm o) {
  return o == OwnTerm::Full ? "full" : "bilinear";
}
std::string bench_geometry_name(BenchGeometry g) {
  switch (g) {
    case BenchGeometry::EntropySimplex: return "entropy";
    case BenchGeometry::EuclideanSimplex: return "euclidean";
    case BenchGeometry::Unconstrained: return "unconstrained";
  }
  return "?";
}
BenchGeometry bench_geometry_from_name(const std::string& s) {
  if (s == "entropy") return BenchGeometry::EntropySimplex;
  if (s == "euclidean") return BenchGeometry::EuclideanSimplex;
  if (s == "unconstrained") return BenchGeometry::Unconstrained;
  throw std::invalid_argument("unknown bench geometry: " + s);
}

std::string sampler_to_string(SamplerKind kind, int batch) {
  switch (kind) {
    case SamplerKind::Full: return "full";
    case SamplerKind::UniformSubset: return "uniform:" + std::to_string(batch);
    case SamplerKind::CyclicPairs: return "cyclic";
  }
  return "?";
}

std::pair<SamplerKind, int> sampler_from_string(const std::string& s) {
  if (s == "full") return {SamplerKind::Full, 0};
  if (s == "cyclic") return {SamplerKind::CyclicPairs, 1};
  if (s.rfind("uniform", 0) == 0) {
    int b = 1;
    if (const auto colon = s.find(':'); colon != std::string::npos)
      b = std::stoi(s.substr(colon + 1));
    return {SamplerKind::UniformSubset, b};
  }
  throw std::invalid_argument("unknown sampler: " + s);
}

json schedule_to_json(const Schedule& s) {
  json j;
  switch (s.kind) {
    case ScheduleKind::Constant:
      j["kind"] = "constant";
      j["gamma"] = s.gamma;
      break;
    case ScheduleKind::InvSqrt:
      j["kind"] = "inv_sqrt";
      j["gamma"] = s.gamma;
      break;
    case ScheduleKind::TheoreticalNonSmooth:
      j["kind"] = "theoretical_non_smooth";
      j["omega"] = s.omega;
      j["grad_bound"] = s.grad_bound;
      j["sigma"] = s.sigma;
      break;
    case ScheduleKind::TheoreticalVR:
      j["kind"] = "theoretical_vr";
      j["omega"] = s.omega;
      j["lipschitz"] = s.lipschitz;
      j["sigma"] = s.sigma;
      break;
  }
  return j;
}

Schedule schedule_from_json(const json& j) {
  Schedule s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    s.kind = ScheduleKind::Constant;
    s.gamma = j.at("gamma").get<double>();
  } else if (kind == "inv_sqrt") {
    s.kind = ScheduleKind::InvSqrt;
    s.gamma = j.at("gamma").get<double>();
  } else if (kind == "theoretical_non_smooth") {
    s.kind = ScheduleKind::TheoreticalNonSmooth;
    s.omega = j.value("omega", 0.0);
    s.grad_bound = j.value("grad_bound", 0.0);
    s.sigma = j.value("sigma", 0.0);
  } else if (kind == "theoretical_vr") {
    s.kind = ScheduleKind::TheoreticalVR;
    s.omega = j.value("omega", 0.0);
    s.lipschitz = j.value("lipschitz", 0.0);
    s.sigma = j.value("sigma", 0.0);
  } else {
    throw std::invalid_argument("unknown schedule kind: " + kind);
  }
  return s;
}

json canonical_config_json(const ExperimentConfig& c) {
  json j;
  json g;
  if (!c.games.files.empty()) {
    g["files"] = c.games.files;
  } else {
    g["n"] = c.games.players;
    g["dim"] = c.games.dim;
    g["alpha"] = c.games.alpha;
    g["mu"] = c.games.mu;
    g["reg_l1"] = c.games.reg_l1;
    g["noise_std"] = c.games.noise_std;
    g["geometry"] = geometry_name(c.games.geometry);
    g["own_term"] = own_term_name(c.games.own_term);
    g["count"] = c.games.count;
    g["base_seed"] = c.games.base_seed;
  }
  j["games"] = g;
  json solvers = json::array();
  for (const auto& s : c.solvers) {
    solvers.push_back({{"id", s.id},
                       {"method", s.method == Method::ExtraGradient ? "eg" : "dseg"},
                       {"sampler", sampler_to_string(s.sampler, s.batch)},
                       {"b", s.batch},
                       {"vr", s.variance_reduction}});
  }
  j["solvers"] = solvers;
  j["grid"] = {{"min", c.grid.min},
               {"max", c.grid.max},
               {"count", c.grid.count},
               {"log", c.grid.log_spaced}};
  j["seeds"] = c.seeds;
  j["k_max"] = c.k_max;
  j["checkpoints"] = c.checkpoints;
  j["geometry"] = bench_geometry_name(c.geometry);
  j["omega"] = c.omega;
  j["metric"] = {{"tol", c.metric.tol}, {"budget", c.metric.budget}};
  return j;
}

}  // namespace

std::string experiment_to_json(const ExperimentConfig& config) {
  return canonical_config_json(config).dump(2) + "\n";
}

ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::string& base_dir) {
  const json j = json::parse(text);
  ExperimentConfig c;
  const json& g = j.at("games");
  if (g.contains("files")) {
    for (const auto& f : g.at("files")) {
      std::string path = f.get<std::string>();
      if (!base_dir.empty() && fs::path(path).is_relative())
        path = (fs::path(base_dir) / path).string();
      c.games.files.push_back(path);
    }
  } else {
    c.games.players = g.at("n").get<int>();
    c.games.dim = g.at("dim").get<int>();
    c.games.alpha = g.value("alpha", 0.0);
    c.games.mu = g.value("mu", 0.01);
    c.games.reg_l1 = g.value("reg_l1", 0.0);
    c.games.noise_std = g.value("noise_std", 0.0);
    c.games.geometry = geometry_from_name(g.value("geometry", "simplex_product"));
    c.games.own_term = g.value("own_term", "full") == "full" ? OwnTerm::Full
                                                             : OwnTerm::Bilinear;
    c.games.count = g.value("count", 1);
    c.games.base_seed = g.value("base_seed", std::uint64_t{0});
  }
  for (const auto& s : j.at("solvers")) {
    SolverSpec spec;
    spec.method = s.value("method", "dseg") == "eg" ? Method::ExtraGradient
                                                    : Method::Dseg;
    const auto [kind, parsed_b] = sampler_from_string(s.value("sampler", "full"));
    spec.sampler = kind;
    spec.batch = s.value("b", parsed_b > 0 ? parsed_b : 1);
    spec.variance_reduction = s.value("vr", false);
    spec.id = s.value("id", "");
    if (spec.id.empty()) {
      spec.id = spec.method == Method::ExtraGradient ? "eg" : "dseg";
      if (spec.method != Method::ExtraGradient) {
        spec.id += "-" + sampler_to_string(spec.sampler, spec.batch);
        if (spec.variance_reduction) spec.id += "-vr";
      }
    }
    c.solvers.push_back(spec);
  }
  if (j.contains("grid")) {
    c.grid.min = j["grid"].value("min", 1e-5);
    c.grid.max = j["grid"].value("max", 1.0);
    c.grid.count = j["grid"].value("count", 32);
    c.grid.log_spaced = j["grid"].value("log", true);
  }
  c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.k_max = j.at("k_max").get<long long>();
  c.checkpoints = j.value("checkpoints", 30);
  c.geometry = bench_geometry_from_name(j.value("geometry", "entropy"));
  c.omega = j.value("omega", 1.0);
  if (j.contains("metric")) {
    c.metric.tol = j["metric"].value("tol", 1e-6);
    c.metric.budget = j["metric"].value("budget", 5000);
  }
  c.validate();
  return c;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string canon = canonical_config_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char ch : canon) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Geometry make_bench_geometry(BenchGeometry kind, const PlayerLayout& layout,
                             double omega) {
  switch (kind) {
    case BenchGeometry::EntropySimplex: return Geometry::entropy_simplex(layout);
    case BenchGeometry::EuclideanSimplex: return Geometry::euclidean_simplex(layout);
    case BenchGeometry::Unconstrained: return Geometry::unconstrained(layout, omega);
  }
  throw std::logic_error("unreachable");
}

namespace {

struct BenchGame {
  QuadraticGame game;
  std::uint64_t seed_tag = 0;  // synthesis seed or file index
};

std::vector<BenchGame> load_bench_games(const ExperimentConfig& config) {
  std::vector<BenchGame> games;
  if (!config.games.files.empty()) {
    std::uint64_t idx = 0;
    for (const auto& f : config.games.files)
      games.push_back({load_game(f), idx++});
    return games;
  }
  for (int g = 0; g < config.games.count; ++g) {
    GameSynthesisParams p;
    p.skewness = config.games.alpha;
    p.conditioning = config.games.mu;
    p.layout = PlayerLayout::uniform(config.games.players, config.games.dim);
    p.seed = config.games.base_seed + static_cast<std::uint64_t>(g);
    games.push_back({synthesize_game(p, config.games.reg_l1, config.games.noise_std,
                                     config.games.geometry, config.games.own_term),
                     p.seed});
  }
  return games;
}

double geometric_mean_final_err(const std::vector<Trace>& traces) {
  double sum = 0.0;
  for (const auto& t : traces) {
    if (t.empty()) return std::numeric_limits<double>::infinity();
    sum += std::log(std::max(t.back().err, 1e-300));
  }
  return std::exp(sum / static_cast<double>(traces.size()));
}

json record_to_json(const RunRecord& r, bool wall_times) {
  json trace = json::array();
  for (const auto& p : r.trace)
    trace.push_back({p.k, p.err, p.inner_gap});
  return json{{"config_hash", r.config_hash},
              {"solver_id", r.solver_id},
              {"gamma", r.gamma},
              {"game_seed", r.game_seed},
              {"seed", r.seed},
              {"final_err", r.final_err},
              {"wall_time_s", wall_times ? r.wall_time_s : 0.0},
              {"artifact_version", r.artifact_version},
              {"trace", trace}};
}

}  // namespace

BenchResult run_bench(const ExperimentConfig& config, int jobs) {
  config.validate();
  const std::vector<BenchGame> games = load_bench_games(config);
  const std::vector<double> grid = config.grid.values();
  const std::uint64_t hash = config_hash(config);

  struct Cell {
    std::size_t solver = 0, gamma = 0, game = 0, seed = 0;
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < config.solvers.size(); ++s)
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (std::size_t q = 0; q < games.size(); ++q)
        for (std::size_t r = 0; r < config.seeds.size(); ++r)
          cells.push_back({s, g, q, r});

  std::vector<RunRecord> records(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      const SolverSpec& spec = config.solvers[cell.solver];
      const BenchGame& bg = games[cell.game];
      try {
        SolverConfig sc;
        sc.method = spec.method;
        sc.sampler = spec.sampler;
        sc.batch = spec.batch;
        sc.variance_reduction = spec.variance_reduction;
        sc.schedule = Schedule::constant(grid[cell.gamma]);
        sc.k_max = config.k_max;
        sc.checkpoints = config.checkpoints;
        sc.metric = config.metric;
        // Per-cell seed: independent of grid position so γ comparisons share
        // game and noise randomness.
        sc.seed = mix_u64(config.seeds[cell.seed], bg.seed_tag);
        const Geometry geometry =
            make_bench_geometry(config.geometry, bg.game.layout, config.omega);
        const RunResult rr = run(bg.game, geometry, sc);
        RunRecord rec;
        rec.config_hash = hash;
        rec.solver_id = spec.id;
        rec.gamma = grid[cell.gamma];
        rec.game_seed = bg.seed_tag;
        rec.seed = config.seeds[cell.seed];
        rec.trace = rr.trace;
        rec.final_err = rr.trace.empty() ? 0.0 : rr.trace.back().err;
        rec.wall_time_s = rr.trace.empty() ? 0.0 : rr.trace.back().elapsed_s;
        records[idx] = std::move(rec);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };

  const int workers = std::max(1, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchResult result;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!errors[i].empty())
      result.warnings.push_back("cell " + std::to_string(i) + " failed: " + errors[i]);

  for (std::size_t s = 0; s < config.solvers.size(); ++s) {
    SolverBenchResult sb;
    sb.solver_id = config.solvers[s].id;
    sb.grid_final_err.assign(grid.size(),
                             std::numeric_limits<double>::infinity());
    std::vector<std::vector<Trace>> per_gamma(grid.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].solver != s || !errors[i].empty()) continue;
      per_gamma[cells[i].gamma].push_back(records[i].trace);
    }
    bool any = false;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (per_gamma[g].empty()) continue;
      any = true;
      sb.grid_final_err[g] = geometric_mean_final_err(per_gamma[g]);
    }
    if (!any) throw std::runtime_error("bench: no surviving cells for solver " +
                                       sb.solver_id);
    sb.best_gamma_index = static_cast<std::size_t>(
        std::min_element(sb.grid_final_err.begin(), sb.grid_final_err.end()) -
        sb.grid_final_err.begin());
    sb.best_gamma = grid[sb.best_gamma_index];
    sb.best_final_err = sb.grid_final_err[sb.best_gamma_index];
    sb.best_on_boundary = grid.size() > 1 && (sb.best_gamma_index == 0 ||
                                              sb.best_gamma_index == grid.size() - 1);
    if (sb.best_on_boundary)
      result.warnings.push_back("solver " + sb.solver_id +
                                ": best gamma lies on the grid boundary");
    sb.best_trace = aggregate(per_gamma[sb.best_gamma_index]);
    result.solvers.push_back(std::move(sb));
  }

  for (auto& rec : records)
    if (!rec.solver_id.empty()) result.records.push_back(std::move(rec));
  return result;
}

void write_bench_outputs(const ExperimentConfig& config, const BenchResult& result,
                         const std::string& out_dir, bool wall_times) {
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "traces");

  const auto write = [](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
  };

  json cj = json::parse(experiment_to_json(config));
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  cj["hash"] = hash_hex;
  write(fs::path(out_dir) / "config.json", cj.dump(2) + "\n");

  const std::vector<double> grid = config.grid.values();
  std::string grid_csv = "solver_id,gamma,final_err,is_best,is_boundary\n";
  char line[256];
  for (const auto& s : result.solvers) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%d,%d\n", s.solver_id.c_str(),
                    grid[g], s.grid_final_err[g], g == s.best_gamma_index ? 1 : 0,
                    (g == 0 || g + 1 == grid.size()) ? 1 : 0);
      grid_csv += line;
    }
  }
  write(fs::path(out_dir) / "grid.csv", grid_csv);

  for (const auto& s : result.solvers)
    write(fs::path(out_dir) / "traces" / (s.solver_id + ".csv"),
          trace_to_csv(s.best_trace, wall_times));

  std::string records;
  for (const auto& r : result.records)
    records += record_to_json(r, wall_times).dump() + "\n";
  write(fs::path(out_dir) / "records.jsonl", records);

  json summary;
  summary["hash"] = hash_hex;
  summary["warnings"] = result.warnings;
  json per_solver = json::array();
  for (const auto& s : result.solvers)
    per_solver.push_back({{"solver_id", s.solver_id},
                          {"best_gamma", s.best_gamma},
                          {"best_final_err", s.best_final_err},
                          {"best_on_boundary", s.best_on_boundary}});
  summary["solvers"] = per_solver;
  write(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
}

int cmd_generate(const GenerateOptions& options) {
  try {
    const QuadraticGame game = synthesize_game(options.params, options.reg_l1,
                                               options.noise_std, options.geometry,
                                               options.own_term);
    save_game(game, options.out_path);
    Rng probe_rng(mix_u64(options.params.seed, 0x9e3779b9));
    const double probe = monotonicity_probe(game, 100, probe_rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        0.5 * (game.payoff + game.payoff.transpose()), Eigen::EigenvaluesOnly);
    std::cout << "wrote " << options.out_path << "\n"
              << "monotonicity probe (min over 100 pairs): " << probe << "\n"
              << "min eigenvalue of sym(A): " << es.eigenvalues().minCoeff() << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

int cmd_solve(const SolveOptions& options) {
  QuadraticGame game;
  try {
    game = load_game(options.game_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const Geometry geometry =
        make_bench_geometry(options.geometry, game.layout, options.omega);
    const RunResult rr = run(game, geometry, options.solver);
    fs::create_directories(options.out_dir);
    {
      std::ofstream out(fs::path(options.out_dir) / "trace.csv", std::ios::binary);
      out << trace_to_csv(rr.trace, options.wall_times);
    }
    {
      json strategy;
      strategy["dims"] = game.layout.dims();
      strategy["values"] = std::vector<double>(
          rr.final_average.values.data(),
          rr.final_average.values.data() + rr.final_average.values.size());
      std::ofstream out(fs::path(options.out_dir) / "final_strategy.json",
                        std::ios::binary);
      out << strategy.dump(2) << "\n";
    }
    const double final_err = rr.trace.empty() ? 0.0 : rr.trace.back().err;
    std::cout << "final Err_N(avg) = " << final_err << "\n";
    if (options.target >= 0.0 && !(final_err <= options.target)) {
      std::cerr << "target " << options.target << " not met\n";
      return kExitTargetNotMet;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

int cmd_bench(const BenchOptions& options) {
  ExperimentConfig config;
  try {
    std::ifstream in(options.config_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config " + options.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    config = experiment_from_json(
        ss.str(), fs::path(options.config_path).parent_path().string());
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const BenchResult result = run_bench(config, options.jobs);
    write_bench_outputs(config, result, options.out_dir, options.wall_times);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& s : result.solvers)
      std::cout << s.solver_id << ": best gamma " << s.best_gamma << ", final Err "
                << s.best_final_err << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

int cmd_spectral(const SpectralOptions& options) {
  try {
    const auto rows = radius_study(options.params);
    if (!options.out_path.empty()) {
      std::ofstream out(options.out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + options.out_path);
      out << radius_rows_to_csv(rows);
    }
    // Per-cell mean minimized radius by scheme.
    for (double alpha : options.params.skewness)
      for (double mu : options.params.conditioning) {
        double sums[3] = {0, 0, 0};
        int count = 0;
        for (const auto& r : rows) {
          if (r.alpha != alpha || r.mu != mu) continue;
          sums[static_cast<int>(r.scheme)] += r.rho_star;
          ++count;
        }
        const int per_scheme = count / 3;
        if (per_scheme == 0) continue;
        std::cout << "alpha=" << alpha << " mu=" << mu
                  << ": mean rho* full=" << sums[0] / per_scheme
                  << " cyclic=" << sums[1] / per_scheme
                  << " random=" << sums[2] / per_scheme << "\n";
      }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

std::string solver_config_to_json(const SolverConfig& c) {
  json j;
  j["method"] = c.method == Method::ExtraGradient ? "eg" : "dseg";
  j["vr"] = c.variance_reduction;
  j["sampler"] = sampler_to_string(c.sampler, c.batch);
  j["b"] = c.batch;
  j["schedule"] = schedule_to_json(c.schedule);
  j["k_max"] = c.k_max;
  j["seed"] = c.seed;
  j["checkpoints"] = c.checkpoints;
  return j.dump(2) + "\n";
}

SolverConfig solver_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  SolverConfig c;
  c.method = j.value("method", "eg") == "eg" ? Method::ExtraGradient : Method::Dseg;
  c.variance_reduction = j.value("vr", false);
  const auto [kind, parsed_b] = sampler_from_string(j.value("sampler", "full"));
  c.sampler = kind;
  c.batch = j.value("b", parsed_b > 0 ? parsed_b : 1);
  if (j.contains("schedule")) c.schedule = schedule_from_json(j["schedule"]);
  c.k_max = j.value("k_max", 10000LL);
  c.seed = j.value("seed", std::uint64_t{0});
  c.checkpoints = j.value("checkpoints", 30);
  return c;
}

}  // namespace dseg
