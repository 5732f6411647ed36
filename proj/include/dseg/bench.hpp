#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dseg/solver.hpp"
#include "dseg/spectral.hpp"

namespace dseg {

inline constexpr const char* kArtifactVersion = "dseg 0.1.0";

// CLI / library exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitTargetNotMet = 3;
inline constexpr int kExitInternalError = 4;

enum class BenchGeometry { EntropySimplex, EuclideanSimplex, Unconstrained };

/// How bench games are obtained: explicit files, or synthesized from params
/// with per-game seeds base_seed, base_seed+1, …
struct GameSource {
  std::vector<std::string> files;
  int players = 2;
  int dim = 3;
  double alpha = 0.0;
  double mu = 0.01;
  double reg_l1 = 0.0;
  double noise_std = 0.0;
  GameGeometry geometry = GameGeometry::SimplexProduct;
  OwnTerm own_term = OwnTerm::Full;
  int count = 1;
  std::uint64_t base_seed = 0;
};

struct SolverSpec {
  std::string id;
  Method method = Method::ExtraGradient;
  SamplerKind sampler = SamplerKind::Full;
  int batch = 1;
  bool variance_reduction = false;
};

struct GridSpec {
  double min = 1e-5;
  double max = 1.0;
  int count = 32;
  bool log_spaced = true;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  GameSource games;
  std::vector<SolverSpec> solvers;
  GridSpec grid;
  std::vector<std::uint64_t> seeds;
  long long k_max = 10000;
  int checkpoints = 30;
  BenchGeometry geometry = BenchGeometry::EntropySimplex;
  double omega = 1.0;  // unconstrained geometry only
  InnerSolveOptions metric;

  void validate() const;
};

std::string experiment_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::string& base_dir = "");

/// FNV-1a over the canonical JSON serialization; stable across machines.
std::uint64_t config_hash(const ExperimentConfig& config);

struct RunRecord {
  std::uint64_t config_hash = 0;
  std::string solver_id;
  double gamma = 0.0;
  std::uint64_t game_seed = 0;
  std::uint64_t seed = 0;
  Trace trace;
  double final_err = 0.0;
  double wall_time_s = 0.0;
  std::string artifact_version = kArtifactVersion;
};

struct SolverBenchResult {
  std::string solver_id;
  double best_gamma = 0.0;
  std::size_t best_gamma_index = 0;
  bool best_on_boundary = false;
  double best_final_err = 0.0;
  Trace best_trace;                   // aggregated over games × seeds
  std::vector<double> grid_final_err; // aggregated final error per γ
};

struct BenchResult {
  std::vector<SolverBenchResult> solvers;
  std::vector<RunRecord> records;
  std::vector<std::string> warnings;
};

/// Runs every (solver, γ, game, seed) cell at equal gradient budget, selects
/// each solver's best γ by final aggregated error. `jobs` bounds the worker
/// threads; results are identical regardless of scheduling.
BenchResult run_bench(const ExperimentConfig& config, int jobs = 1);

/// Writes config.json, grid.csv, traces/<solver>.csv, records.jsonl and
/// summary.json into `out_dir` (created if needed). Byte-deterministic unless
/// `wall_times` is set.
void write_bench_outputs(const ExperimentConfig& config, const BenchResult& result,
                         const std::string& out_dir, bool wall_times = false);

// --- CLI entry points (thin wrappers used by tools/ and tests) ---

struct GenerateOptions {
  GameSynthesisParams params;
  double reg_l1 = 0.0;
  double noise_std = 0.0;
  GameGeometry geometry = GameGeometry::SimplexProduct;
  OwnTerm own_term = OwnTerm::Full;
  std::string out_path;
};

int cmd_generate(const GenerateOptions& options);

struct SolveOptions {
  std::string game_path;
  SolverConfig solver;
  BenchGeometry geometry = BenchGeometry::EntropySimplex;
  double omega = 1.0;
  std::string out_dir;
  double target = -1.0;  // optional Err target; exit 3 when missed
  bool wall_times = false;
};

int cmd_solve(const SolveOptions& options);

struct BenchOptions {
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  bool wall_times = false;
};

int cmd_bench(const BenchOptions& options);

struct SpectralOptions {
  RadiusStudyParams params;
  std::string out_path;
};

int cmd_spectral(const SpectralOptions& options);

/// JSON round-trip for single-run solver configs.
std::string solver_config_to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const std::string& text);

Geometry make_bench_geometry(BenchGeometry kind, const PlayerLayout& layout,
                             double omega);

}  // namespace dseg
