#include "dseg/game.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dseg {

namespace {

double sgn0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Random point of the game's domain (simplex blocks or a unit ball scaled
/// per block for unconstrained games).
Vector random_domain_point(const QuadraticGame& game, Rng& rng) {
  Vector v(game.layout.total_dim());
  for (int i = 0; i < game.layout.players(); ++i) {
    auto b = game.layout.block(v, i);
    if (game.geometry == GameGeometry::SimplexProduct) {
      // Exponential spacings normalized to the simplex.
      double sum = 0.0;
      for (int j = 0; j < b.size(); ++j) {
        double u = rng.next_double();
        while (u <= 0.0) u = rng.next_double();
        b[j] = -std::log(u);
        sum += b[j];
      }
      b /= sum;
    } else {
      for (int j = 0; j < b.size(); ++j) b[j] = rng.next_normal();
    }
  }
  return v;
}

}  // namespace

void QuadraticGame::validate() const {
  if (payoff.rows() != layout.total_dim() || payoff.cols() != layout.total_dim())
    throw std::invalid_argument("payoff shape does not match layout");
  if (reg_l1 < 0.0) throw std::invalid_argument("reg_l1 must be >= 0");
  if (noise_std < 0.0) throw std::invalid_argument("noise_std must be >= 0");
  if (own_term == OwnTerm::Bilinear &&
      (geometry != GameGeometry::Unconstrained || reg_l1 != 0.0))
    throw std::invalid_argument(
        "bilinear own term requires unconstrained geometry and reg_l1 = 0");
}

QuadraticGame synthesize_game(const GameSynthesisParams& params, double reg_l1,
                              double noise_std, GameGeometry geometry,
                              OwnTerm own_term) {
  if (params.skewness < 0.0 || params.skewness > 1.0)
    throw std::invalid_argument("skewness must lie in [0,1]");
  if (params.conditioning <= 0.0)
    throw std::invalid_argument("conditioning must be > 0");

  const int d = params.layout.total_dim();
  Rng rng(params.seed);
  Matrix g(d, d), f(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = rng.next_normal();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) f(r, c) = rng.next_normal();

  Matrix sym = 0.5 * (g + g.transpose());
  const Matrix skew = 0.5 * (f - f.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || !es.eigenvalues().allFinite())
    throw std::runtime_error("eigenvalue computation failed during game synthesis");
  const double mu0 = es.eigenvalues().minCoeff();
  sym.diagonal().array() += params.conditioning - mu0;

  QuadraticGame game;
  game.layout = params.layout;
  const double a = params.skewness;
  game.payoff = (1.0 - a) * sym + a * skew;
  game.reg_l1 = reg_l1;
  game.noise_std = noise_std;
  game.geometry = geometry;
  game.own_term = own_term;
  game.synthesis = params;
  game.validate();
  return game;
}

double loss(const QuadraticGame& game, int player, const Strategy& theta) {
  if (player < 0 || player >= game.layout.players())
    throw std::out_of_range("player index out of range");
  const auto ti = theta.block(player);
  const double quad = ti.dot(game.block_row(player) * theta.values);
  if (game.own_term == OwnTerm::Bilinear)
    return quad - 0.5 * ti.dot(game.own_block(player) * ti);
  double l1 = 0.0;
  const double center = 1.0 / game.layout.dim(player);
  for (int j = 0; j < ti.size(); ++j) l1 += std::abs(ti[j] - center);
  return quad + game.reg_l1 * l1;
}

Vector subgradient(const QuadraticGame& game, int player, const Strategy& theta) {
  if (player < 0 || player >= game.layout.players())
    throw std::out_of_range("player index out of range");
  Vector g = game.block_row(player) * theta.values;
  if (game.own_term == OwnTerm::Bilinear) return g;
  const auto ti = theta.block(player);
  g.noalias() += game.own_block(player).transpose() * ti;
  if (game.reg_l1 > 0.0) {
    const double center = 1.0 / game.layout.dim(player);
    for (int j = 0; j < g.size(); ++j)
      g[j] += game.reg_l1 * sgn0(ti[j] - center);
  }
  return g;
}

Vector noisy_gradient(const QuadraticGame& game, int player, const Strategy& theta,
                      Rng& rng) {
  Vector g = subgradient(game, player, theta);
  if (game.noise_std > 0.0)
    for (int j = 0; j < g.size(); ++j) g[j] += game.noise_std * rng.next_normal();
  return g;
}

Vector simultaneous_gradient(const QuadraticGame& game, const Strategy& theta) {
  Vector out(game.layout.total_dim());
  for (int i = 0; i < game.layout.players(); ++i)
    game.layout.block(out, i) = subgradient(game, i, theta);
  return out;
}

double monotonicity_probe(const QuadraticGame& game, int trials, Rng& rng) {
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Strategy a{game.layout, random_domain_point(game, rng)};
    Strategy b{game.layout, random_domain_point(game, rng)};
    const Vector fa = simultaneous_gradient(game, a);
    const Vector fb = simultaneous_gradient(game, b);
    worst = std::min(worst, (fa - fb).dot(a.values - b.values));
  }
  return worst;
}

double estimate_gradient_bound(const QuadraticGame& game, int samples, Rng& rng) {
  const int n = game.layout.players();
  Vector gi = Vector::Zero(n);
  for (int s = 0; s < samples; ++s) {
    Strategy p{game.layout, random_domain_point(game, rng)};
    for (int i = 0; i < n; ++i)
      gi[i] = std::max(gi[i], subgradient(game, i, p).norm());
  }
  gi *= 1.1;
  return std::sqrt(gi.squaredNorm() / n);
}

double lipschitz_bound(const QuadraticGame& game) {
  // F is linear: block i of its matrix is A_i, plus A_iiᵀ on the diagonal
  // block for the Full own term.
  Matrix m = game.payoff;
  if (game.own_term == OwnTerm::Full)
    for (int i = 0; i < game.layout.players(); ++i) {
      const int o = game.layout.offset(i);
      const int d = game.layout.dim(i);
      m.block(o, o, d, d) += game.payoff.block(o, o, d, d).transpose();
    }
  return m.jacobiSvd().singularValues()[0];
}

std::string game_to_json(const QuadraticGame& game) {
  nlohmann::json j;
  j["n"] = game.layout.players();
  j["dims"] = game.layout.dims();
  std::vector<double> payoff;
  payoff.reserve(static_cast<std::size_t>(game.payoff.size()));
  for (int r = 0; r < game.payoff.rows(); ++r)
    for (int c = 0; c < game.payoff.cols(); ++c) payoff.push_back(game.payoff(r, c));
  j["payoff"] = payoff;
  j["reg_l1"] = game.reg_l1;
  j["noise_std"] = game.noise_std;
  j["geometry"] = game.geometry == GameGeometry::SimplexProduct ? "simplex_product"
                                                                : "unconstrained";
  j["own_term"] = game.own_term == OwnTerm::Full ? "full" : "bilinear";
  if (game.synthesis) {
    j["synthesis"] = {{"alpha", game.synthesis->skewness},
                      {"mu", game.synthesis->conditioning},
                      {"seed", game.synthesis->seed}};
  }
  return j.dump(2) + "\n";
}

QuadraticGame game_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  QuadraticGame game;
  game.layout = PlayerLayout(j.at("dims").get<std::vector<int>>());
  if (j.at("n").get<int>() != game.layout.players())
    throw std::invalid_argument("game file: n does not match dims");
  const auto payoff = j.at("payoff").get<std::vector<double>>();
  const int d = game.layout.total_dim();
  if (payoff.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
    throw std::invalid_argument("game file: payoff size does not match layout");
  game.payoff.resize(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      game.payoff(r, c) = payoff[static_cast<std::size_t>(r) * d + c];
  game.reg_l1 = j.at("reg_l1").get<double>();
  game.noise_std = j.at("noise_std").get<double>();
  const auto geom = j.at("geometry").get<std::string>();
  if (geom == "simplex_product") game.geometry = GameGeometry::SimplexProduct;
  else if (geom == "unconstrained") game.geometry = GameGeometry::Unconstrained;
  else throw std::invalid_argument("game file: unknown geometry " + geom);
  const auto own = j.at("own_term").get<std::string>();
  if (own == "full") game.own_term = OwnTerm::Full;
  else if (own == "bilinear") game.own_term = OwnTerm::Bilinear;
  else throw std::invalid_argument("game file: unknown own_term " + own);
  if (j.contains("synthesis")) {
    GameSynthesisParams p;
    p.skewness = j["synthesis"].at("alpha").get<double>();
    p.conditioning = j["synthesis"].at("mu").get<double>();
    p.seed = j["synthesis"].at("seed").get<std::uint64_t>();
    p.layout = game.layout;
    game.synthesis = p;
  }
  game.validate();
  return game;
}

void save_game(const QuadraticGame& game, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << game_to_json(game);
  if (!out) throw std::runtime_error("failed writing " + path);
}

QuadraticGame load_game(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open game file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return game_from_json(ss.str());
}

}  // namespace dseg
