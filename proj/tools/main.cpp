#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "dseg/bench.hpp"

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("DSEG_OUT_ROOT")) return env;
  return ".";
}

std::string under_root(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const std::string root = default_out_root();
  return root == "." ? path : root + "/" + path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibrium solver for convex quadratic games: extra-gradient "
               "with player sampling, benchmarks and spectral studies"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "synthesize a random game file");
  dseg::GenerateOptions gen;
  int gen_players = 2, gen_dim = 3;
  std::string gen_geometry = "simplex_product", gen_own = "full";
  std::uint64_t gen_seed = 0;
  generate->add_option("--n", gen_players, "number of players")->required();
  generate->add_option("--dim", gen_dim, "actions per player")->required();
  generate->add_option("--alpha", gen.params.skewness, "skew weight in [0,1]");
  generate->add_option("--mu", gen.params.conditioning,
                       "smallest eigenvalue of the symmetric part");
  generate->add_option("--reg-l1", gen.reg_l1, "L1 regularization strength");
  generate->add_option("--noise-std", gen.noise_std, "gradient noise std");
  generate->add_option("--geometry", gen_geometry, "simplex_product|unconstrained");
  generate->add_option("--own-term", gen_own, "full|bilinear");
  generate->add_option("--seed", gen_seed, "synthesis seed");
  generate->add_option("--out", gen.out_path, "output game file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "run one solver on a game file");
  dseg::SolveOptions sol;
  std::string sol_config_path, sol_method = "eg", sol_sampler = "full";
  std::string sol_geometry = "entropy", sol_schedule = "constant";
  double sol_gamma = 0.1;
  bool sol_vr = false;
  std::uint64_t sol_seed = 0;
  bool sol_seed_set = false;
  solve->add_option("--game", sol.game_path, "game file")->required();
  solve->add_option("--config", sol_config_path, "solver config JSON");
  solve->add_option("--method", sol_method, "eg|dseg");
  solve->add_option("--sampler", sol_sampler, "full|uniform:b|cyclic");
  solve->add_option("--b", sol.solver.batch, "players per mini-batch");
  solve->add_flag("--vr", sol_vr, "variance reduction");
  solve->add_option("--schedule", sol_schedule,
                    "constant|inv_sqrt|theoretical_non_smooth|theoretical_vr");
  solve->add_option("--gamma", sol_gamma, "constant step size (or inv_sqrt base)");
  solve->add_option("--k-max", sol.solver.k_max, "gradient computation budget");
  solve->add_option("--checkpoints", sol.solver.checkpoints, "trace checkpoints");
  solve->add_option("--seed", sol_seed, "run seed")->each([&](const std::string&) {
    sol_seed_set = true;
  });
  solve->add_option("--geometry", sol_geometry, "entropy|euclidean|unconstrained");
  solve->add_option("--omega", sol.omega, "omega for unconstrained geometry");
  solve->add_option("--target", sol.target, "exit 3 unless final Err <= target");
  solve->add_flag("--wall-times", sol.wall_times, "persist measured wall times");
  solve->add_option("--out", sol.out_dir, "output directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "grid-search benchmark from a config");
  dseg::BenchOptions ben;
  ben.jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (ben.jobs < 1) ben.jobs = 1;
  bench->add_option("--config", ben.config_path, "experiment config JSON")->required();
  bench->add_option("--out", ben.out_dir, "result directory")->required();
  bench->add_option("--jobs", ben.jobs, "worker threads");
  bench->add_flag("--wall-times", ben.wall_times, "persist measured wall times");

  // spectral
  auto* spectral = app.add_subcommand("spectral",
                                      "spectral radius study of sampling schemes");
  dseg::SpectralOptions spec;
  spec.params.skewness = {0.5, 0.9};
  spec.params.conditioning = {0.01};
  std::uint64_t spec_seed = 0;
  spectral->add_option("--alphas", spec.params.skewness, "skewness cells");
  spectral->add_option("--mus", spec.params.conditioning, "conditioning cells");
  spectral->add_option("--games", spec.params.games_per_cell, "games per cell");
  spectral->add_option("--dim", spec.params.player_dim, "per-player dimension");
  spectral->add_option("--seed", spec_seed, "study seed");
  spectral->add_option("--out", spec.out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      gen.params.layout = dseg::PlayerLayout::uniform(gen_players, gen_dim);
      gen.params.seed = gen_seed;
      gen.geometry = gen_geometry == "unconstrained"
                         ? dseg::GameGeometry::Unconstrained
                         : dseg::GameGeometry::SimplexProduct;
      gen.own_term = gen_own == "bilinear" ? dseg::OwnTerm::Bilinear
                                           : dseg::OwnTerm::Full;
      gen.out_path = under_root(gen.out_path);
      return dseg::cmd_generate(gen);
    }
    if (solve->parsed()) {
      if (!sol_config_path.empty()) {
        sol.solver = dseg::solver_config_from_json(read_file(sol_config_path));
      } else {
        sol.solver.method = sol_method == "dseg" ? dseg::Method::Dseg
                                                 : dseg::Method::ExtraGradient;
        if (sol_sampler == "full") sol.solver.sampler = dseg::SamplerKind::Full;
        else if (sol_sampler == "cyclic") sol.solver.sampler = dseg::SamplerKind::CyclicPairs;
        else sol.solver.sampler = dseg::SamplerKind::UniformSubset;
        if (const auto colon = sol_sampler.find(':'); colon != std::string::npos)
          sol.solver.batch = std::stoi(sol_sampler.substr(colon + 1));
        sol.solver.variance_reduction = sol_vr;
        if (sol_schedule == "constant")
          sol.solver.schedule = dseg::Schedule::constant(sol_gamma);
        else if (sol_schedule == "inv_sqrt")
          sol.solver.schedule = dseg::Schedule::inv_sqrt(sol_gamma);
        else if (sol_schedule == "theoretical_non_smooth")
          sol.solver.schedule.kind = dseg::ScheduleKind::TheoreticalNonSmooth;
        else if (sol_schedule == "theoretical_vr")
          sol.solver.schedule.kind = dseg::ScheduleKind::TheoreticalVR;
        else {
          std::cerr << "config error: unknown schedule " << sol_schedule << "\n";
          return dseg::kExitConfigError;
        }
      }
      if (sol_seed_set) sol.solver.seed = sol_seed;
      if (sol_geometry == "entropy") sol.geometry = dseg::BenchGeometry::EntropySimplex;
      else if (sol_geometry == "euclidean") sol.geometry = dseg::BenchGeometry::EuclideanSimplex;
      else if (sol_geometry == "unconstrained") sol.geometry = dseg::BenchGeometry::Unconstrained;
      else {
        std::cerr << "config error: unknown geometry " << sol_geometry << "\n";
        return dseg::kExitConfigError;
      }
      sol.out_dir = under_root(sol.out_dir);
      return dseg::cmd_solve(sol);
    }
    if (bench->parsed()) {
      ben.out_dir = under_root(ben.out_dir);
      return dseg::cmd_bench(ben);
    }
    if (spectral->parsed()) {
      spec.params.seed = spec_seed;
      spec.out_path = under_root(spec.out_path);
      return dseg::cmd_spectral(spec);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dseg::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dseg::kExitInternalError;
  }
  return dseg::kExitConfigError;
}
