#include "dseg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dseg/game.hpp"

namespace dseg {

OperatorSpec build_operator(SamplingScheme scheme, const Matrix& payoff, double gamma) {
  if (payoff.rows() != payoff.cols() || payoff.rows() % 2 != 0)
    throw std::invalid_argument("build_operator: payoff must be square with even size");
  if (gamma < 0.0) throw std::invalid_argument("build_operator: gamma must be >= 0");
  const auto n = payoff.rows();
  const auto d = n / 2;
  const Matrix identity = Matrix::Identity(n, n);

  OperatorSpec spec{scheme, gamma, Matrix()};
  switch (scheme) {
    case SamplingScheme::Full:
      spec.matrix = identity - gamma * payoff + gamma * gamma * payoff * payoff;
      break;
    case SamplingScheme::Cyclic: {
      // Masked single-player iterations; the composed operator covers two of
      // them (four gradient evaluations).
      Matrix m1 = Matrix::Zero(n, n);
      m1.topLeftCorner(d, d).setIdentity();
      Matrix m2 = Matrix::Zero(n, n);
      m2.bottomRightCorner(d, d).setIdentity();
      const Matrix m1a = m1 * payoff;
      const Matrix m2a = m2 * payoff;
      const Matrix a12 = identity - gamma * m1a + gamma * gamma * m1a * m2a;
      const Matrix a21 = identity - gamma * m2a + gamma * gamma * m2a * m1a;
      spec.matrix = a12 * a21;
      break;
    }
    case SamplingScheme::Random: {
      const Matrix base = 4.0 * identity - 2.0 * gamma * payoff +
                          gamma * gamma * payoff * payoff;
      spec.matrix = (base * base) / 16.0;
      break;
    }
  }
  return spec;
}

SpectralRadiusResult spectral_radius(const Matrix& m) {
  if (!m.allFinite())
    throw std::invalid_argument("spectral_radius: non-finite entries");
  if (m.rows() != m.cols())
    throw std::invalid_argument("spectral_radius: matrix must be square");

  SpectralRadiusResult res;
  const double norm0 = m.norm();
  if (norm0 == 0.0) return res;  // zero matrix

  constexpr int kMaxSquarings = 60;
  constexpr double kRelTol = 1e-6;

  // Track B = M^{2^s} / exp(a); the estimate after s squarings is
  // exp(a / 2^s) since B is kept at unit Frobenius norm.
  Matrix b = m / norm0;
  double log_scale = std::log(norm0);
  double estimate = std::exp(log_scale);
  res.achieved_tol = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= kMaxSquarings; ++s) {
    b = (b * b).eval();
    const double norm = b.norm();
    if (norm == 0.0) {  // nilpotent
      res.value = 0.0;
      res.converged = true;
      res.squarings = s;
      res.achieved_tol = 0.0;
      return res;
    }
    log_scale = 2.0 * log_scale + std::log(norm);
    b /= norm;
    const double next = std::exp(log_scale / std::pow(2.0, s));
    res.achieved_tol = std::abs(next - estimate) / std::max(next, 1e-300);
    estimate = next;
    res.squarings = s;
    if (res.achieved_tol < kRelTol) {
      res.value = estimate;
      return res;
    }
  }
  res.value = estimate;
  res.converged = false;
  return res;
}

GridMinimum min_radius_over_grid(SamplingScheme scheme, const Matrix& payoff,
                                 const std::vector<double>& gamma_grid) {
  if (gamma_grid.empty())
    throw std::invalid_argument("min_radius_over_grid: empty grid");
  GridMinimum best{gamma_grid.front(),
                   std::numeric_limits<double>::infinity()};
  for (double gamma : gamma_grid) {
    const double rho = spectral_radius(build_operator(scheme, payoff, gamma).matrix).value;
    if (rho < best.rho) best = {gamma, rho};
  }
  return best;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  grid.reserve(64);
  const double lo = std::log(1e-3);
  const double hi = std::log(2.0);
  for (int i = 0; i < 64; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * i / 63.0));
  return grid;
}

std::vector<RadiusStudyRow> radius_study(const RadiusStudyParams& params) {
  if (params.games_per_cell < 1)
    throw std::invalid_argument("radius_study: games_per_cell must be >= 1");
  const std::vector<double> grid =
      params.gamma_grid.empty() ? default_gamma_grid() : params.gamma_grid;
  const PlayerLayout layout = PlayerLayout::uniform(2, params.player_dim);

  std::vector<RadiusStudyRow> rows;
  constexpr SamplingScheme kSchemes[] = {SamplingScheme::Full, SamplingScheme::Cyclic,
                                         SamplingScheme::Random};
  int cell = 0;
  for (double alpha : params.skewness) {
    for (double mu : params.conditioning) {
      std::vector<RadiusStudyRow> cell_rows;
      std::vector<double> full_rhos;
      for (int g = 0; g < params.games_per_cell; ++g) {
        GameSynthesisParams sp;
        sp.skewness = alpha;
        sp.conditioning = mu;
        sp.layout = layout;
        sp.seed = mix_u64(params.seed, static_cast<std::uint64_t>(cell) * 1000003ULL +
                                           static_cast<std::uint64_t>(g));
        const QuadraticGame game =
            synthesize_game(sp, 0.0, 0.0, GameGeometry::Unconstrained, OwnTerm::Bilinear);
        for (SamplingScheme scheme : kSchemes) {
          const GridMinimum gm = min_radius_over_grid(scheme, game.payoff, grid);
          RadiusStudyRow row;
          row.alpha = alpha;
          row.mu = mu;
          row.game_seed = sp.seed;
          row.scheme = scheme;
          row.gamma_star = gm.gamma;
          row.rho_star = gm.rho;
          cell_rows.push_back(row);
          if (scheme == SamplingScheme::Full) full_rhos.push_back(gm.rho);
        }
      }
      std::sort(full_rhos.begin(), full_rhos.end());
      const std::size_t h = full_rhos.size() / 2;
      const double median = full_rhos.size() % 2 == 1
                                ? full_rhos[h]
                                : 0.5 * (full_rhos[h - 1] + full_rhos[h]);
      for (auto& row : cell_rows) {
        row.rho_ratio_to_full_median = row.rho_star / median;
        rows.push_back(row);
      }
      ++cell;
    }
  }
  return rows;
}

const char* scheme_name(SamplingScheme scheme) {
  switch (scheme) {
    case SamplingScheme::Full: return "full";
    case SamplingScheme::Cyclic: return "cyclic";
    case SamplingScheme::Random: return "random";
  }
  return "?";
}

std::string radius_rows_to_csv(const std::vector<RadiusStudyRow>& rows) {
  std::string out =
      "alpha,mu,game_seed,scheme,gamma_star,rho_star,rho_ratio_to_full_median\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%llu,%s,%.17g,%.17g,%.17g\n",
                  r.alpha, r.mu, static_cast<unsigned long long>(r.game_seed),
                  scheme_name(r.scheme), r.gamma_star, r.rho_star,
                  r.rho_ratio_to_full_median);
    out += line;
  }
  return out;
}

}  // namespace dseg
