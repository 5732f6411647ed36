#pragma once

#include <cstdint>
#include <vector>

#include "dseg/layout.hpp"

namespace dseg {

enum class SamplingScheme { Full, Cyclic, Random };

/// Linear operator mapping θ_k to θ_{k+4} (four gradient evaluations) for
/// extra-gradient on an unconstrained two-player bilinear game; Random is the
/// expected-iterate operator.
struct OperatorSpec {
  SamplingScheme scheme = SamplingScheme::Full;
  double gamma = 0.0;
  Matrix matrix;
};

OperatorSpec build_operator(SamplingScheme scheme, const Matrix& payoff, double gamma);

struct SpectralRadiusResult {
  double value = 0.0;
  double achieved_tol = 0.0;  // last relative change between estimates
  bool converged = true;
  int squarings = 0;
};

/// ρ(M) via normalized repeated squaring (Gelfand's formula): estimates
/// ‖M^{2^s}‖^{1/2^s} until two successive values agree to 1e-6 relative,
/// capped at 60 squarings.
SpectralRadiusResult spectral_radius(const Matrix& m);

struct GridMinimum {
  double gamma = 0.0;
  double rho = 0.0;
};

/// Grid point minimizing ρ(operator); ties broken toward smaller γ.
GridMinimum min_radius_over_grid(SamplingScheme scheme, const Matrix& payoff,
                                 const std::vector<double>& gamma_grid);

/// 64 logarithmically spaced step sizes in [1e-3, 2].
std::vector<double> default_gamma_grid();

struct RadiusStudyParams {
  std::vector<double> skewness;       // α values (cells)
  std::vector<double> conditioning;   // μ values (cells)
  int games_per_cell = 100;
  int player_dim = 3;                 // d (two players of this dimension)
  std::uint64_t seed = 0;
  std::vector<double> gamma_grid;     // defaults to default_gamma_grid()
};

struct RadiusStudyRow {
  double alpha = 0.0;
  double mu = 0.0;
  std::uint64_t game_seed = 0;
  SamplingScheme scheme = SamplingScheme::Full;
  double gamma_star = 0.0;
  double rho_star = 0.0;
  double rho_ratio_to_full_median = 0.0;
};

/// Samples random bilinear two-player games per (α, μ) cell and minimizes
/// each scheme's operator radius over the γ grid. Ratios are taken against
/// the cell's median full-extra-gradient radius.
std::vector<RadiusStudyRow> radius_study(const RadiusStudyParams& params);

const char* scheme_name(SamplingScheme scheme);

std::string radius_rows_to_csv(const std::vector<RadiusStudyRow>& rows);

}  // namespace dseg
