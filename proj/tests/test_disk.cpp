#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "runge/disk.hpp"
#include "runge/fit.hpp"

using namespace runge;

namespace {

// Gauss-Legendre nodes/weights on [0, b] by Newton iteration on P_m.
struct Quadrature {
  std::vector<double> x, w;
};

Quadrature gauss_legendre(int m, double b) {
  Quadrature q;
  const double pi = std::acos(-1.0);
  for (int i = 0; i < m; ++i) {
    double t = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    q.x.push_back(0.5 * b * (t + 1));
    q.w.push_back(b / ((1 - t * t) * dp * dp));
  }
  return q;
}

double radial_l2_sq(int l, double R) {  // int_0^R r^{2l} r dr
  Quadrature q = gauss_legendre(64, R);
  double s = 0;
  for (size_t i = 0; i < q.x.size(); ++i)
    s += q.w[i] * std::pow(q.x[i], 2 * l + 1);
  return s;
}

double radial_h1_sq(int l, double R) {  // gradient + value parts
  Quadrature q = gauss_legendre(64, R);
  double s = 0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    double r = q.x[i];
    double grad = (l > 0) ? 2.0 * l * l * std::pow(r, 2 * l - 1) : 0.0;
    s += q.w[i] * (grad + std::pow(r, 2 * l + 1));
  }
  return s;
}

}  // namespace

TEST_CASE("closed-form mode norms at n = 2") {
  disk::ModeNorms m1 = disk::mode_norms(1, 2);
  CHECK(m1.l2_D1 == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(m1.h1_D1 ==
        doctest::Approx(std::sqrt(4.25) / 4.0).epsilon(1e-14));
  CHECK(m1.hhalf_boundary == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  disk::ModeNorms m0 = disk::mode_norms(0, 2);
  CHECK(m0.l2_D1 == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(disk::mode_norms(-1, 2), ConfigError);
}

TEST_CASE("mode norms against an independent radial quadrature") {
  for (int l = 0; l <= 20; ++l) {
    disk::ModeNorms m = disk::mode_norms(l, 2);
    CHECK(m.l2_D1 * m.l2_D1 ==
          doctest::Approx(radial_l2_sq(l, 0.5)).epsilon(1e-10));
    CHECK(m.h1_D1 * m.h1_D1 ==
          doctest::Approx(radial_h1_sq(l, 0.5)).epsilon(1e-10));
  }
}

TEST_CASE("singular values decay like 2^{-l} with the closed form") {
  for (int l = 0; l <= 30; ++l)
    CHECK(disk::mode_norms(l, 2).sigma ==
          doctest::Approx(disk::closed_form_sigma(l)).epsilon(1e-13));
  for (int l = 150; l <= 160; ++l)
    CHECK(disk::closed_form_sigma(l + 1) / disk::closed_form_sigma(l) ==
          doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("solid inner product on the degree diagonal") {
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(3);
  u0[0] = std::sqrt(2.0 * std::acos(-1.0));  // the constant function 1
  CHECK(disk::solid_inner_product(u0, u0, 1.0) ==
        doctest::Approx(std::acos(-1.0)).epsilon(1e-14));
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1[1] = 1.0;
  CHECK(disk::solid_inner_product(e1, e1, 0.5) ==
        doctest::Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(disk::solid_inner_product(u0, e1, 0.5) == 0.0);
  Eigen::VectorXd wrong(2);
  CHECK_THROWS_AS(disk::solid_inner_product(u0, wrong, 0.5), ConfigError);
}

TEST_CASE("log source coefficients: guards and magnitude") {
  CHECK_THROWS_AS(disk::log_source_coefficients(0.4, 10), ConfigError);
  CHECK_THROWS_AS(disk::log_source_coefficients(1.0, 10), ConfigError);
  Eigen::VectorXd b = disk::log_source_coefficients(0.8, 50);
  for (int l = 1; l < 50; ++l)  // |b_{l+1}/b_l| -> 1/r0
    CHECK(std::abs(b[l + 1] / b[l]) <= 1.0 / 0.8 + 1e-12);
  Eigen::VectorXd far = disk::log_source_coefficients(2.0, 50);
  CHECK(std::abs(far[50]) < std::abs(far[1]));
}

TEST_CASE("diagonal family bookkeeping") {
  Eigen::VectorXd b = disk::log_source_coefficients(0.8, 30);
  disk::DiagonalFamily f = disk::diagonal_family(b);
  double h1sq = 0;
  for (int l = 0; l <= 30; ++l) {
    disk::ModeNorms m = disk::mode_norms(l, 2);
    CHECK(f.s[l] == doctest::Approx(m.l2_D1).epsilon(1e-14));
    CHECK(f.w[l] == doctest::Approx(1.0 + l).epsilon(1e-14));
    h1sq += b[l] * b[l] * m.h1_D1 * m.h1_D1;
  }
  CHECK(f.h1 == doctest::Approx(std::sqrt(h1sq)).epsilon(1e-14));

  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(4);
  e2[2] = 3.0;
  double mode2 = std::pow(0.75, 6) / 6.0 + 2.0 * std::pow(0.75, 4);
  CHECK(disk::extended_h1_norm(e2, 0.75) ==
        doctest::Approx(3.0 * std::sqrt(mode2)).epsilon(1e-14));
}

TEST_CASE("diagonal cost: trivial targets, monotonicity, Pareto dominance") {
  disk::DiagonalFamily f =
      disk::diagonal_family(disk::log_source_coefficients(0.8, 120));
  double l2 = 0;
  for (int l = 0; l < f.b.size(); ++l)
    l2 += f.b[l] * f.b[l] * f.s[l] * f.s[l];
  l2 = std::sqrt(l2);

  CHECK(disk::diagonal_cost(f, 2.0 * l2, disk::DiskCurve::Cutoff) == 0.0);
  CHECK(disk::diagonal_cost(f, 2.0 * l2, disk::DiskCurve::Pareto) == 0.0);

  double prevC = -1, prevP = -1;
  for (double e : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    double mc = disk::diagonal_cost(f, e * f.h1, disk::DiskCurve::Cutoff);
    double mp = disk::diagonal_cost(f, e * f.h1, disk::DiskCurve::Pareto);
    REQUIRE(std::isfinite(mc));
    REQUIRE(std::isfinite(mp));
    CHECK(mp <= mc * (1 + 1e-9));  // exact Pareto never beaten by a cutoff
    CHECK(mc >= prevC);
    CHECK(mp >= prevP - 1e-12);
    prevC = mc;
    prevP = mp;
  }

  // keeping every degree drives the cutoff residual to zero exactly
  CHECK(std::isfinite(disk::diagonal_cost(f, 1e-300, disk::DiskCurve::Cutoff)));

  // a source far from the disk is cheap to approximate
  disk::DiagonalFamily far =
      disk::diagonal_family(disk::log_source_coefficients(2.0, 120));
  CHECK(disk::diagonal_cost(far, 1e-8 * far.h1, disk::DiskCurve::Cutoff) <
        disk::diagonal_cost(f, 1e-8 * f.h1, disk::DiskCurve::Cutoff));
}

TEST_CASE("optimality: minimal norms grow at the 2^{l/2} rate") {
  auto rows = disk::optimality_experiment(24, 10.0);
  REQUIRE(rows.size() == 24);
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.l < 4 || r.l > 20) continue;
    REQUIRE(r.min_boundary_norm > 0);
    x.push_back(r.l);
    y.push_back(std::log(r.min_boundary_norm));
  }
  LineFit lf = line_fit(x, y);
  CHECK(lf.slope >= 0.9 * 0.5 * std::log(2.0));

  // a tighter budget can only push the minimal norm up
  auto tight = disk::optimality_experiment(24, 100.0);
  for (size_t i = 0; i < rows.size(); ++i)
    CHECK(tight[i].min_boundary_norm >= rows[i].min_boundary_norm - 1e-12);

  CHECK_THROWS_AS(disk::optimality_experiment(0), ConfigError);
  CHECK_THROWS_AS(disk::optimality_experiment(41), ConfigError);
}
