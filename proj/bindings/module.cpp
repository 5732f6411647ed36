#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dseg/bench.hpp"

namespace py = pybind11;
using namespace dseg;

namespace {

QuadraticGame synthesize(int players, int dim, double alpha, double mu,
                         std::uint64_t seed, double reg_l1, double noise_std,
                         const std::string& geometry, const std::string& own_term) {
  GameSynthesisParams p;
  p.skewness = alpha;
  p.conditioning = mu;
  p.layout = PlayerLayout::uniform(players, dim);
  p.seed = seed;
  return synthesize_game(
      p, reg_l1, noise_std,
      geometry == "unconstrained" ? GameGeometry::Unconstrained
                                  : GameGeometry::SimplexProduct,
      own_term == "bilinear" ? OwnTerm::Bilinear : OwnTerm::Full);
}

Geometry geometry_for(const QuadraticGame& game, const std::string& kind,
                      double omega) {
  if (kind == "entropy") return Geometry::entropy_simplex(game.layout);
  if (kind == "euclidean") return Geometry::euclidean_simplex(game.layout);
  if (kind == "unconstrained") return Geometry::unconstrained(game.layout, omega);
  throw std::invalid_argument("unknown geometry: " + kind);
}

SolverConfig config_for(const std::string& method, const std::string& sampler,
                        int batch, bool vr, double gamma, long long k_max,
                        std::uint64_t seed, int checkpoints) {
  SolverConfig c;
  c.method = method == "dseg" ? Method::Dseg : Method::ExtraGradient;
  if (sampler == "full") c.sampler = SamplerKind::Full;
  else if (sampler == "cyclic") c.sampler = SamplerKind::CyclicPairs;
  else c.sampler = SamplerKind::UniformSubset;
  c.batch = batch;
  c.variance_reduction = vr;
  c.schedule = Schedule::constant(gamma);
  c.k_max = k_max;
  c.seed = seed;
  c.checkpoints = checkpoints;
  return c;
}

}  // namespace

PYBIND11_MODULE(_dseg, m) {
  m.doc() = "Extra-gradient solvers with player sampling for convex quadratic games";

  py::class_<QuadraticGame>(m, "Game")
      .def_property_readonly("players",
                             [](const QuadraticGame& g) { return g.layout.players(); })
      .def_property_readonly("dims",
                             [](const QuadraticGame& g) { return g.layout.dims(); })
      .def_property_readonly("payoff",
                             [](const QuadraticGame& g) { return g.payoff; })
      .def_property_readonly("reg_l1",
                             [](const QuadraticGame& g) { return g.reg_l1; })
      .def_property_readonly("noise_std",
                             [](const QuadraticGame& g) { return g.noise_std; })
      .def("to_json", &game_to_json);

  m.def("synthesize_game", &synthesize, py::arg("players"), py::arg("dim"),
        py::arg("alpha") = 0.0, py::arg("mu") = 0.01, py::arg("seed") = 0,
        py::arg("reg_l1") = 0.0, py::arg("noise_std") = 0.0,
        py::arg("geometry") = "simplex_product", py::arg("own_term") = "full");
  m.def("game_from_json", &game_from_json);
  m.def("load_game", &load_game);
  m.def("save_game", &save_game);

  m.def(
      "loss",
      [](const QuadraticGame& g, int player, const Vector& theta) {
        return loss(g, player, Strategy{g.layout, theta});
      },
      py::arg("game"), py::arg("player"), py::arg("theta"));
  m.def(
      "subgradient",
      [](const QuadraticGame& g, int player, const Vector& theta) {
        return subgradient(g, player, Strategy{g.layout, theta});
      },
      py::arg("game"), py::arg("player"), py::arg("theta"));
  m.def(
      "simultaneous_gradient",
      [](const QuadraticGame& g, const Vector& theta) {
        return simultaneous_gradient(g, Strategy{g.layout, theta});
      },
      py::arg("game"), py::arg("theta"));

  m.def("project_simplex", &project_simplex, py::arg("v"));

  m.def(
      "nash_error",
      [](const QuadraticGame& g, const Vector& theta, const std::string& geometry,
         double omega, double tol, int budget) {
        const NashErrorReport r =
            nash_error(g, geometry_for(g, geometry, omega), Strategy{g.layout, theta},
                       InnerSolveOptions{tol, budget});
        py::dict out;
        out["total"] = r.total;
        out["per_player"] = r.per_player;
        out["inner_gap"] = r.inner_gap;
        out["certified"] = r.certified;
        return out;
      },
      py::arg("game"), py::arg("theta"), py::arg("geometry") = "entropy",
      py::arg("omega") = 1.0, py::arg("tol") = 1e-6, py::arg("budget") = 5000);

  m.def(
      "solve",
      [](const QuadraticGame& g, const std::string& method, const std::string& sampler,
         int batch, bool vr, double gamma, long long k_max, std::uint64_t seed,
         int checkpoints, const std::string& geometry, double omega,
         std::optional<Vector> theta0) {
        SolverConfig c =
            config_for(method, sampler, batch, vr, gamma, k_max, seed, checkpoints);
        if (theta0) c.theta0 = *theta0;
        const RunResult r = run(g, geometry_for(g, geometry, omega), c);
        std::vector<long long> ks;
        std::vector<double> errs, gaps;
        for (const auto& p : r.trace) {
          ks.push_back(p.k);
          errs.push_back(p.err);
          gaps.push_back(p.inner_gap);
        }
        py::dict out;
        out["k"] = ks;
        out["err"] = errs;
        out["inner_gap"] = gaps;
        out["average"] = r.final_average.values;
        out["last_iterate"] = r.final_iterate.values;
        return out;
      },
      py::arg("game"), py::arg("method") = "eg", py::arg("sampler") = "full",
      py::arg("batch") = 1, py::arg("vr") = false, py::arg("gamma") = 0.1,
      py::arg("k_max") = 10000, py::arg("seed") = 0, py::arg("checkpoints") = 30,
      py::arg("geometry") = "entropy", py::arg("omega") = 1.0,
      py::arg("theta0") = std::nullopt);

  m.def(
      "schedule_value",
      [](const std::string& kind, double gamma, double omega, double grad_bound,
         double lipschitz, double sigma, int players, int batch, long long horizon,
         long long tau) {
        Schedule s;
        if (kind == "constant") s.kind = ScheduleKind::Constant;
        else if (kind == "inv_sqrt") s.kind = ScheduleKind::InvSqrt;
        else if (kind == "theoretical_non_smooth")
          s.kind = ScheduleKind::TheoreticalNonSmooth;
        else if (kind == "theoretical_vr") s.kind = ScheduleKind::TheoreticalVR;
        else throw std::invalid_argument("unknown schedule kind: " + kind);
        s.gamma = gamma;
        s.omega = omega;
        s.grad_bound = grad_bound;
        s.lipschitz = lipschitz;
        s.sigma = sigma;
        s.players = players;
        s.batch = batch;
        s.horizon = horizon;
        return schedule_value(s, tau);
      },
      py::arg("kind"), py::arg("gamma") = 0.1, py::arg("omega") = 0.0,
      py::arg("grad_bound") = 0.0, py::arg("lipschitz") = 0.0, py::arg("sigma") = 0.0,
      py::arg("players") = 0, py::arg("batch") = 0, py::arg("horizon") = 0,
      py::arg("tau") = 0);

  m.def(
      "build_operator",
      [](const std::string& scheme, const Matrix& payoff, double gamma) {
        SamplingScheme s;
        if (scheme == "full") s = SamplingScheme::Full;
        else if (scheme == "cyclic") s = SamplingScheme::Cyclic;
        else if (scheme == "random") s = SamplingScheme::Random;
        else throw std::invalid_argument("unknown scheme: " + scheme);
        return build_operator(s, payoff, gamma).matrix;
      },
      py::arg("scheme"), py::arg("payoff"), py::arg("gamma"));
  m.def(
      "spectral_radius",
      [](const Matrix& matrix) { return spectral_radius(matrix).value; },
      py::arg("matrix"));
  m.def(
      "radius_study",
      [](const std::vector<double>& alphas, const std::vector<double>& mus,
         int games_per_cell, int dim, std::uint64_t seed) {
        RadiusStudyParams p;
        p.skewness = alphas;
        p.conditioning = mus;
        p.games_per_cell = games_per_cell;
        p.player_dim = dim;
        p.seed = seed;
        std::vector<py::dict> out;
        for (const auto& r : radius_study(p)) {
          py::dict row;
          row["alpha"] = r.alpha;
          row["mu"] = r.mu;
          row["game_seed"] = r.game_seed;
          row["scheme"] = scheme_name(r.scheme);
          row["gamma_star"] = r.gamma_star;
          row["rho_star"] = r.rho_star;
          row["rho_ratio_to_full_median"] = r.rho_ratio_to_full_median;
          out.push_back(row);
        }
        return out;
      },
      py::arg("alphas"), py::arg("mus"), py::arg("games_per_cell") = 100,
      py::arg("dim") = 3, py::arg("seed") = 0);

  m.attr("__version__") = "0.1.0";
}
