#include "dseg/metrics.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InnerResult {
  double min_value = 0.0;
  double gap = 0.0;
  int iters = 0;
  bool certified = true;
};

struct InnerProblem {
  // f(z) = zᵀ Q z + cᵀ z + λ‖z − u‖₁ (+ constant from the other players),
  // minimized over player i's feasible set. Q is the raw own block; the
  // gradient uses its symmetrization.
  Matrix q;
  Matrix q_sym;  // Q + Qᵀ
  Vector c;
  double lambda = 0.0;
  double center = 0.0;

  double value(const Vector& z) const {
    double v = z.dot(q * z) + c.dot(z);
    if (lambda > 0.0) v += lambda * (z.array() - center).abs().sum();
    return v;
  }
  Vector grad(const Vector& z) const {
    Vector g = q_sym * z + c;
    if (lambda > 0.0)
      for (int j = 0; j < g.size(); ++j) {
        const double d = z[j] - center;
        g[j] += lambda * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
      }
    return g;
  }
};

/// Subgradient descent over the simplex with Polyak-type steps.
///
/// Lower bounds come from the linearization at each iterate (for a convex f,
/// f* ≥ f(z) + min_e ⟨g, e⟩ − ⟨g, z⟩ over the simplex); the returned gap is
/// best value minus best lower bound, a valid optimality certificate. When the
/// certificate stalls (an L1 kink holds the bound back), the step targets an
/// adaptive level slightly below the incumbent instead, which keeps the value
/// estimate improving geometrically.
InnerResult minimize_on_simplex(const InnerProblem& p, const Vector& start,
                                const InnerSolveOptions& opt) {
  const int d = static_cast<int>(start.size());
  InnerResult res;
  double best = kInf;
  Vector best_point = start;
  double lower = -kInf;
  // Cheap candidates: vertices, the L1 center, the warm start.
  for (int v = 0; v < d; ++v) {
    Vector e = Vector::Zero(d);
    e[v] = 1.0;
    const double fe = p.value(e);
    if (fe < best) {
      best = fe;
      best_point = e;
    }
  }
  {
    const Vector center = Vector::Constant(d, 1.0 / d);
    const double fc = p.value(center);
    if (fc < best) {
      best = fc;
      best_point = center;
    }
  }

  Vector z = start;
  double level = kInf;  // adaptive margin below the incumbent
  int stall = 0;
  for (int it = 0; it < opt.budget; ++it) {
    ++res.iters;
    const double fz = p.value(z);
    const Vector g = p.grad(z);
    lower = std::max(lower, fz + g.minCoeff() - g.dot(z));
    const bool meaningful = fz < best - 1e-12 * std::max(1.0, std::abs(best));
    if (fz < best) {
      best = fz;
      best_point = z;
    }
    if (meaningful) {
      stall = 0;
    } else if (++stall >= 50) {
      level = level == kInf ? std::max(best - lower, opt.tol) : 0.5 * level;
      z = best_point;
      stall = 0;
      if (level <= 0.25 * opt.tol) break;  // value converged, bound stuck
    }
    if (best - lower <= opt.tol) break;
    const double gnorm2 = g.squaredNorm();
    if (gnorm2 <= 1e-28) break;
    const double target = std::max(lower, best - std::min(level, best - lower));
    const double step = std::max(fz - target, 0.25 * opt.tol) / gnorm2;
    z = project_simplex(z - step * g);
  }
  res.min_value = best;
  res.gap = std::max(0.0, best - lower);
  res.certified = res.gap <= opt.tol;
  return res;
}

/// Unconstrained inner minimum of ½ zᵀ S z + cᵀ z (S the symmetrized
/// quadratic form). Solvable only when S is PSD and c lies in its range.
InnerResult minimize_unconstrained(const Matrix& q_sym, const Vector& c) {
  InnerResult res;
  const double scale = std::max(1.0, std::max(q_sym.cwiseAbs().maxCoeff(),
                                              c.cwiseAbs().maxCoeff()));
  if (q_sym.cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    if (c.norm() <= 1e-12 * scale) {
      res.min_value = 0.0;  // objective identically zero
      return res;
    }
    res.certified = false;  // linear and unbounded below
    res.gap = kInf;
    res.min_value = -kInf;
    return res;
  }
  Eigen::LDLT<Matrix> ldlt(q_sym);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const Vector z = ldlt.solve(-c);
    if ((q_sym * z + c).norm() <= 1e-8 * scale) {
      res.min_value = 0.5 * z.dot(q_sym * z) + c.dot(z);
      return res;
    }
  }
  res.certified = false;
  res.gap = kInf;
  res.min_value = -kInf;
  return res;
}

}  // namespace

NashErrorReport nash_error(const QuadraticGame& game, const Geometry& geometry,
                           const Strategy& theta, const InnerSolveOptions& options) {
  if (options.tol <= 0.0) throw std::invalid_argument("nash_error: tol must be > 0");
  const int n = game.layout.players();
  NashErrorReport report;
  report.per_player.resize(static_cast<std::size_t>(n));
  report.inner_iters.resize(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    const int d = game.layout.dim(i);
    InnerProblem p;
    p.q = game.own_block(i);
    if (game.own_term == OwnTerm::Bilinear) p.q *= 0.5;
    p.q_sym = p.q + p.q.transpose();
    // Cross term: A_i θ with the own-block contribution removed.
    p.c = game.block_row(i) * theta.values - game.own_block(i) * theta.block(i);
    p.lambda = game.own_term == OwnTerm::Full ? game.reg_l1 : 0.0;
    p.center = 1.0 / d;

    const double current = loss(game, i, theta);
    InnerResult inner;
    if (geometry.constrains_to_simplex()) {
      const bool linear = p.lambda == 0.0 && p.q.cwiseAbs().maxCoeff() == 0.0;
      if (linear) {
        inner.min_value = p.c.minCoeff();  // exact vertex minimum
      } else {
        inner = minimize_on_simplex(p, theta.block(i), options);
      }
    } else if (p.lambda > 0.0) {
      inner.certified = false;  // unconstrained L1 minimization not supported
      inner.gap = kInf;
      inner.min_value = current;
    } else {
      inner = minimize_unconstrained(p.q_sym, p.c);
    }
    report.per_player[static_cast<std::size_t>(i)] = current - inner.min_value;
    report.inner_iters[static_cast<std::size_t>(i)] = inner.iters;
    report.inner_gap = std::max(report.inner_gap, inner.gap);
    report.certified = report.certified && inner.certified;
    report.total += current - inner.min_value;
  }
  return report;
}

double slope(const Trace& trace, double window_decades) {
  if (window_decades <= 0.0) throw std::invalid_argument("slope: window must be > 0");
  if (trace.empty()) throw std::invalid_argument("slope: empty trace");
  const double k_max = static_cast<double>(trace.back().k);
  const double cutoff = std::log10(k_max) - window_decades;
  std::vector<std::pair<double, double>> pts;
  for (const auto& t : trace) {
    if (t.err <= 0.0 || t.k <= 0) continue;
    const double lk = std::log10(static_cast<double>(t.k));
    if (lk + 1e-12 >= cutoff) pts.emplace_back(lk, std::log10(t.err));
  }
  if (pts.size() < 5)
    throw std::runtime_error("slope: fewer than 5 positive checkpoints in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double det = m * sxx - sx * sx;
  if (det <= 0.0) throw std::runtime_error("slope: degenerate window");
  return (m * sxy - sx * sy) / det;
}

Trace aggregate(const std::vector<Trace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  if (traces.size() == 1) return traces.front();

  // Common grid: the first trace's checkpoints, clipped to the k-range every
  // trace covers; per-trace values are interpolated in (log k, log err).
  long long lo = 0, hi = std::numeric_limits<long long>::max();
  for (const auto& t : traces) {
    if (t.empty()) throw std::invalid_argument("aggregate: empty trace");
    lo = std::max(lo, t.front().k);
    hi = std::min(hi, t.back().k);
  }
  Trace out;
  for (const auto& point : traces.front()) {
    if (point.k < lo || point.k > hi) continue;
    const double lk = std::log(static_cast<double>(point.k));
    double sum_log = 0.0, sum_sq = 0.0, gap = 0.0, elapsed = 0.0;
    for (const auto& t : traces) {
      // Locate the surrounding checkpoints.
      std::size_t j = 1;
      while (j + 1 < t.size() && t[j].k < point.k) ++j;
      const auto& a = t[j - 1];
      const auto& b = t[j];
      double le;
      if (a.k == b.k || point.k <= a.k) {
        le = std::log(std::max(a.err, 1e-300));
      } else {
        const double la = std::log(static_cast<double>(a.k));
        const double lb = std::log(static_cast<double>(b.k));
        const double w = (lk - la) / (lb - la);
        le = (1.0 - w) * std::log(std::max(a.err, 1e-300)) +
             w * std::log(std::max(b.err, 1e-300));
      }
      sum_log += le;
      sum_sq += le * le;
      gap = std::max(gap, std::max(a.inner_gap, b.inner_gap));
      elapsed += (1.0 / static_cast<double>(traces.size())) * b.elapsed_s;
    }
    const double m = static_cast<double>(traces.size());
    const double mean_log = sum_log / m;
    const double var_log = std::max(0.0, sum_sq / m - mean_log * mean_log);
    TracePoint p;
    p.k = point.k;
    p.err = std::exp(mean_log);
    p.err_std = std::exp(std::sqrt(var_log));
    p.inner_gap = gap;
    p.elapsed_s = elapsed;
    out.push_back(p);
  }
  if (out.empty()) throw std::runtime_error("aggregate: traces share no k-range");
  return out;
}

std::string trace_to_csv(const Trace& trace, bool wall_times) {
  std::string out = "k,err,err_std,inner_gap_max,elapsed_s\n";
  char line[192];
  for (const auto& t : trace) {
    std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g,%.17g,%.6f\n", t.k, t.err,
                  t.err_std, t.inner_gap, wall_times ? t.elapsed_s : 0.0);
    out += line;
  }
  return out;
}

Trace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace csv: empty");
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TracePoint t;
    if (std::sscanf(line.c_str(), "%lld,%lg,%lg,%lg,%lg", &t.k, &t.err, &t.err_std,
                    &t.inner_gap, &t.elapsed_s) != 5)
      throw std::runtime_error("trace csv: bad line: " + line);
    trace.push_back(t);
  }
  return trace;
}

}  // namespace dseg
