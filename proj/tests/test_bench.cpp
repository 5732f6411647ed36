#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dseg/bench.hpp"

using namespace dseg;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.games.players = 3;
  c.games.dim = 2;
  c.games.alpha = 0.7;
  c.games.mu = 0.05;
  c.games.noise_std = 0.5;
  c.games.count = 2;
  c.games.base_seed = 10;
  SolverSpec eg;
  eg.id = "eg";
  eg.method = Method::ExtraGradient;
  SolverSpec ds;
  ds.id = "dseg-b1";
  ds.method = Method::Dseg;
  ds.sampler = SamplerKind::UniformSubset;
  ds.batch = 1;
  c.solvers = {eg, ds};
  c.grid = {0.01, 0.3, 4, true};
  c.seeds = {1, 2};
  c.k_max = 600;
  c.checkpoints = 6;
  return c;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = ss.str();
  }
  return files;
}

}  // namespace

TEST_CASE("experiment config JSON round trip preserves the hash") {
  const ExperimentConfig c = tiny_config();
  const ExperimentConfig back = experiment_from_json(experiment_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(experiment_to_json(back) == experiment_to_json(c));
}

TEST_CASE("config hash changes exactly with semantic fields") {
  const ExperimentConfig base = tiny_config();
  ExperimentConfig changed = base;
  changed.k_max += 2;
  CHECK(config_hash(changed) != config_hash(base));
  changed = base;
  changed.grid.count = 5;
  CHECK(config_hash(changed) != config_hash(base));
  changed = base;
  changed.seeds = {1, 3};
  CHECK(config_hash(changed) != config_hash(base));
  // A reparse of the same config is not a semantic change.
  CHECK(config_hash(experiment_from_json(experiment_to_json(base))) ==
        config_hash(base));
}

TEST_CASE("solver config JSON round trip") {
  SolverConfig c;
  c.method = Method::Dseg;
  c.sampler = SamplerKind::UniformSubset;
  c.batch = 3;
  c.variance_reduction = true;
  c.schedule = Schedule::constant(0.07);
  c.k_max = 1234;
  c.seed = 99;
  c.checkpoints = 17;
  const SolverConfig back = solver_config_from_json(solver_config_to_json(c));
  CHECK(back.method == Method::Dseg);
  CHECK(back.sampler == SamplerKind::UniformSubset);
  CHECK(back.batch == 3);
  CHECK(back.variance_reduction);
  CHECK(back.schedule.gamma == 0.07);
  CHECK(back.k_max == 1234);
  CHECK(back.seed == 99);
  CHECK(back.checkpoints == 17);
}

TEST_CASE("bench runs every cell at the same gradient budget") {
  const ExperimentConfig c = tiny_config();
  const BenchResult result = run_bench(c, 2);
  // 2 solvers x 4 gammas x 2 games x 2 seeds
  CHECK(result.records.size() == 32);
  for (const auto& r : result.records) {
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.back().k >= c.k_max);
    CHECK(r.config_hash == config_hash(c));
  }
  REQUIRE(result.solvers.size() == 2);
  for (const auto& s : result.solvers) {
    CHECK(s.best_final_err > 0.0);
    CHECK(!s.best_trace.empty());
  }
}

TEST_CASE("bench results do not depend on the number of worker threads") {
  const ExperimentConfig c = tiny_config();
  const BenchResult a = run_bench(c, 1);
  const BenchResult b = run_bench(c, 4);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].solver_id == b.records[i].solver_id);
    CHECK(a.records[i].gamma == b.records[i].gamma);
    CHECK(a.records[i].final_err == b.records[i].final_err);
  }
}

TEST_CASE("boundary warning fires when the best gamma is at a grid end") {
  ExperimentConfig c = tiny_config();
  c.solvers.resize(1);
  c.grid = {1e-9, 2e-9, 2, true};  // absurdly small steps: best is the max = boundary
  c.k_max = 200;
  c.checkpoints = 3;
  const BenchResult result = run_bench(c, 2);
  REQUIRE(result.solvers.size() == 1);
  CHECK(result.solvers[0].best_on_boundary);
  bool warned = false;
  for (const auto& w : result.warnings)
    warned = warned || w.find("boundary") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("bench output directory is byte-identical across repeated runs") {
  const ExperimentConfig c = tiny_config();
  const fs::path root = fs::temp_directory_path() / "dseg_bench_det";
  fs::remove_all(root);
  const BenchResult r1 = run_bench(c, 2);
  write_bench_outputs(c, r1, (root / "a").string());
  const BenchResult r2 = run_bench(c, 1);
  write_bench_outputs(c, r2, (root / "b").string());
  const auto ta = read_tree(root / "a");
  const auto tb = read_tree(root / "b");
  REQUIRE(!ta.empty());
  CHECK(ta == tb);
  fs::remove_all(root);
}

TEST_CASE("generate and solve round trip through files") {
  const fs::path root = fs::temp_directory_path() / "dseg_cli_roundtrip";
  fs::remove_all(root);
  fs::create_directories(root);

  GenerateOptions gen;
  gen.params.skewness = 1.0;
  gen.params.conditioning = 0.01;
  gen.params.layout = PlayerLayout::uniform(5, 3);
  gen.params.seed = 3;
  gen.out_path = (root / "game.json").string();
  CHECK(cmd_generate(gen) == kExitOk);

  const QuadraticGame game = load_game(gen.out_path);
  CHECK((game.payoff + game.payoff.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Bitwise-identical file on regeneration.
  GenerateOptions gen2 = gen;
  gen2.out_path = (root / "game2.json").string();
  CHECK(cmd_generate(gen2) == kExitOk);
  std::ifstream a(gen.out_path, std::ios::binary), b(gen2.out_path, std::ios::binary);
  std::ostringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());

  SolveOptions sol;
  sol.game_path = gen.out_path;
  sol.solver.method = Method::ExtraGradient;
  sol.solver.schedule = Schedule::constant(0.1);
  sol.solver.k_max = 2000;
  sol.solver.checkpoints = 5;
  sol.out_dir = (root / "run").string();
  CHECK(cmd_solve(sol) == kExitOk);
  CHECK(fs::exists(root / "run" / "trace.csv"));
  CHECK(fs::exists(root / "run" / "final_strategy.json"));

  // Unreachable target -> exit 3; missing game file -> exit 2.
  sol.target = 1e-300;
  CHECK(cmd_solve(sol) == kExitTargetNotMet);
  sol.game_path = (root / "missing.json").string();
  sol.target = -1.0;
  CHECK(cmd_solve(sol) == kExitConfigError);
  fs::remove_all(root);
}
