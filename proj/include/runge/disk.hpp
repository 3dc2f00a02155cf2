#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "runge/grid.hpp"

// Closed-form model: harmonic functions on the unit ball with inner ball of
// radius 1/2 and full boundary circle.  Everything is diagonal over the
// degree-l sectors, with circle-normalized boundary modes; the norm formulas
// are kept n-generic, evaluation happens at n = 2.
namespace runge::disk {

template <typename Scalar = double>
Scalar lambda_l(int l, int n) {
  return Scalar(l) * Scalar(l + n - 2);
}

struct ModeNorms {
  int l = 0;
  double l2_D1 = 0;           // ||r^l psi_l||_{L2(B_{1/2})}
  double h1_D1 = 0;           // ||r^l psi_l||_{H1(B_{1/2})}
  double hhalf_boundary = 0;  // (1 + lambda_l^{1/2})^{1/2}
  double alpha = 0;           // 1 / h1_D1
  double sigma = 0;           // l2_D1 / hhalf_boundary
};

inline ModeNorms mode_norms(int l, int n) {
  if (l < 0 || n < 2) throw ConfigError("mode_norms needs l >= 0, n >= 2");
  ModeNorms m;
  m.l = l;
  double scale = std::pow(2.0, -l - 0.5 * n);
  m.l2_D1 = scale / std::sqrt(double(2 * l + n));
  m.h1_D1 = scale * std::sqrt(4.0 * l + 1.0 / (2 * l + n));
  m.hhalf_boundary = std::sqrt(1.0 + std::sqrt(lambda_l<double>(l, n)));
  m.alpha = 1.0 / m.h1_D1;
  m.sigma = m.l2_D1 / m.hhalf_boundary;
  return m;
}

// sigma_l = (2l+2)^{-1/2} 2^{-l-1} (1+l)^{-1/2} = 2^{-l-3/2} / (l+1), n = 2.
inline double closed_form_sigma(int l) {
  return std::pow(2.0, -l - 1.5) / (l + 1);
}

// sum_l R^{2l+n} (2l+n)^{-1} u_l v_l over the degree diagonal; the entries
// are coefficients against circle-normalized modes, so (u_0, u_0) = 2*pi for
// the constant function 1 (whose normalized coefficient is sqrt(2*pi)).
inline double solid_inner_product(const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& v, double R,
                                  int n = 2) {
  if (u.size() != v.size())
    throw ConfigError("solid_inner_product: mismatched degree ranges");
  double s = 0;
  for (int l = 0; l < u.size(); ++l)
    s += std::pow(R, 2 * l + n) / (2 * l + n) * u[l] * v[l];
  return s;
}

// Expansion of log|x - x0| with |x0| = r0 over the circle-normalized basis
// (cosine components in the frame aligned with x0).
inline Eigen::VectorXd log_source_coefficients(double x0_radius, int lmax) {
  if (!(x0_radius > 0.5))
    throw ConfigError("log source center must satisfy |x0| > 1/2 "
                      "(otherwise not harmonic on D1)");
  if (x0_radius == 1.0)
    throw ConfigError("log source center on the unit circle is excluded");
  const double pi = std::acos(-1.0);
  Eigen::VectorXd b(lmax + 1);
  b[0] = std::log(x0_radius) * std::sqrt(2 * pi);
  for (int l = 1; l <= lmax; ++l)
    b[l] = -std::sqrt(pi) * std::pow(x0_radius, -l) / l;
  return b;
}

// Per-degree data of a diagonal target sum_l b_l r^l psi_l on D1 = B_{1/2}:
// L2(B_{1/2}) factors s_l, boundary H^{1/2} weights w_l, H1(B_{1/2}) norm.
struct DiagonalFamily {
  Eigen::VectorXd b, s, w;
  double h1 = 0;
};

inline DiagonalFamily diagonal_family(const Eigen::VectorXd& b) {
  DiagonalFamily f;
  f.b = b;
  const int L = static_cast<int>(b.size()) - 1;
  f.s.resize(L + 1);
  f.w.resize(L + 1);
  double h1sq = 0;
  for (int l = 0; l <= L; ++l) {
    ModeNorms m = mode_norms(l, 2);
    f.s[l] = m.l2_D1;
    f.w[l] = 1.0 + l;  // squared H^{1/2} multiplier at n = 2
    h1sq += b[l] * b[l] * m.h1_D1 * m.h1_D1;
  }
  f.h1 = std::sqrt(h1sq);
  return f;
}

// ||h~||_{H1(B_R)} of the same diagonal target on a larger ball (Thm-1.3
// normalization); requires the expansion to converge there.
inline double extended_h1_norm(const Eigen::VectorXd& b, double R) {
  double h1sq = 0;
  for (int l = 0; l < b.size(); ++l) {
    double mode2 = std::pow(R, 2 * l + 2) / (2 * l + 2) +
                   l * std::pow(R, 2 * l);
    h1sq += b[l] * b[l] * mode2;
  }
  return std::sqrt(h1sq);
}

enum class DiskCurve { Cutoff, Pareto };

// Minimal boundary H^{1/2} norm achieving ||h - u||_{L2(B_{1/2})} <= target,
// cutoff (keep leading degrees) or exact Pareto (Lagrangian, diagonal).
// Returns NaN when the target is unreachable within the retained degrees.
inline double diagonal_cost(const DiagonalFamily& f, double target,
                            DiskCurve kind) {
  const int L = static_cast<int>(f.b.size());
  double t2 = target * target;
  if (kind == DiskCurve::Cutoff) {
    std::vector<double> tail(L + 1, 0.0);
    for (int l = L - 1; l >= 0; --l)
      tail[l] = tail[l + 1] + f.b[l] * f.b[l] * f.s[l] * f.s[l];
    double cost2 = 0;
    for (int k = 0; k <= L; ++k) {
      if (tail[k] <= t2) return std::sqrt(cost2);
      if (k < L) cost2 += f.b[k] * f.b[k] * f.w[k];
    }
    return std::nan("");
  }
  auto resid2 = [&](double loglam) {
    double lam = std::exp(loglam);
    double r2 = 0;
    for (int l = 0; l < L; ++l) {
      double d = f.b[l] * f.w[l] / (f.w[l] + lam * f.s[l] * f.s[l]);
      r2 += d * d * f.s[l] * f.s[l];
    }
    return r2;
  };
  if (resid2(-120.0) <= t2) return 0.0;
  if (resid2(700.0) > t2) return std::nan("");  // exp(>709) would overflow
  double lo = -120.0, hi = 700.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (resid2(mid) > t2 ? lo : hi) = mid;
  }
  double lam = std::exp(hi), n2 = 0;
  for (int l = 0; l < L; ++l) {
    double c = f.b[l] * lam * f.s[l] * f.s[l] / (f.w[l] + lam * f.s[l] * f.s[l]);
    n2 += f.w[l] * c * c;
  }
  return std::sqrt(n2);
}

// M(eps) over an epsilon window, residual measured against eps * normalizer.
inline std::vector<double> diagonal_cost_curve(const DiagonalFamily& f,
                                               const std::vector<double>& eps,
                                               double normalizer,
                                               DiskCurve kind) {
  std::vector<double> m;
  m.reserve(eps.size());
  for (double e : eps) m.push_back(diagonal_cost(f, e * normalizer, kind));
  return m;
}

struct OptimalityRow {
  int l = 0;
  double l2_D1 = 0, h1_D1 = 0, sigma_l = 0;
  double min_boundary_norm = 0;
  double ratio_to_growth = 0;  // min norm / 2^{l/2}
};

// Exact minimal boundary H^{1/2} norm among harmonic u with
// ||h_l - u||_{L2(B_{1/2})} <= (budget_factor * l)^{-1}, h_l = alpha_l g_l.
// Diagonal: only the degree-l component of u helps.
inline std::vector<OptimalityRow> optimality_experiment(
    int lmax, double budget_factor = 10.0) {
  if (lmax < 1 || lmax > 40)
    throw ConfigError("optimality_experiment needs 1 <= lmax <= 40");
  std::vector<OptimalityRow> rows;
  rows.reserve(lmax);
  for (int l = 1; l <= lmax; ++l) {
    ModeNorms m = mode_norms(l, 2);
    double eps = 1.0 / (budget_factor * l);
    double t = std::max(0.0, m.alpha - eps / m.l2_D1);
    OptimalityRow r;
    r.l = l;
    r.l2_D1 = m.l2_D1;
    r.h1_D1 = m.h1_D1;
    r.sigma_l = m.sigma;
    r.min_boundary_norm = t * m.hhalf_boundary;
    r.ratio_to_growth = r.min_boundary_norm / std::pow(2.0, 0.5 * l);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace runge::disk
