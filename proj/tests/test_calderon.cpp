#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "runge/calderon.hpp"
#include "runge/rng.hpp"

using namespace runge;

namespace {

GridDomain makeDomain(int n, BoundarySide side = BoundarySide::Full) {
  return build_grid(n, Layout{}, side);
}

}  // namespace

TEST_CASE("free DtN annihilates constants") {
  GridDomain dom = makeDomain(32);
  Potential q0 = Potential::zero(dom, dom.d1(), 5.0);
  LocalDtN dtn = dtn_local(dom, q0);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(dtn.matrix.cols());
  CHECK((dtn.matrix * one).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(dtn.symmetry_residual <= 1e-12);
}

TEST_CASE("DtN symmetry for rough potentials") {
  GridDomain dom = makeDomain(32, BoundarySide::South);
  Rng rng(41);
  Potential q;
  q.q = rng.vector(dom.nodeCount(), -2.0, 2.0);
  q.bound = 5.0;
  q.support = dom.d2();
  LocalDtN dtn = dtn_local(dom, q, 2);
  CHECK(dtn.symmetry_residual <= 1e-9);
}

TEST_CASE("gap norm: coincidence, argument symmetry, Gram homogeneity") {
  GridDomain dom = makeDomain(32, BoundarySide::South);
  Potential q0 = Potential::zero(dom, dom.d1(), 5.0);
  Potential qb = Potential::bump(dom, dom.d1(), 1.0, 5.0);
  LocalDtN d0 = dtn_local(dom, q0);
  LocalDtN db = dtn_local(dom, qb);

  CHECK(dtn_gap_norm(d0, d0) == 0.0);
  double gap = dtn_gap_norm(d0, db);
  CHECK(gap > 0);
  CHECK(dtn_gap_norm(db, d0) == doctest::Approx(gap).epsilon(1e-12));

  // stiffer input Gram means smaller operator norm: 4x input Gram halves it
  LocalDtN scaled = d0;
  scaled.gram_in *= 4.0;
  LocalDtN scaledb = db;
  scaledb.gram_in *= 4.0;
  CHECK(dtn_gap_norm(scaled, scaledb) ==
        doctest::Approx(0.5 * gap).epsilon(1e-12));
}

TEST_CASE("gap norm grows with the accessible arc") {
  GridDomain full = makeDomain(32, BoundarySide::Full);
  GridDomain south = makeDomain(32, BoundarySide::South);
  double gapFull, gapSouth;
  {
    LocalDtN a = dtn_local(full, Potential::zero(full, full.d1(), 5.0));
    LocalDtN b = dtn_local(full, Potential::bump(full, full.d1(), 1.0, 5.0));
    gapFull = dtn_gap_norm(a, b);
  }
  {
    LocalDtN a = dtn_local(south, Potential::zero(south, south.d1(), 5.0));
    LocalDtN b = dtn_local(south, Potential::bump(south, south.d1(), 1.0, 5.0));
    gapSouth = dtn_gap_norm(a, b);
  }
  CHECK(gapFull >= gapSouth - 1e-12);
}

TEST_CASE("Fourier H^{-1} distance: bounds, homogeneity, oracle") {
  GridDomain dom = makeDomain(64, BoundarySide::South);
  Eigen::VectorXd ind = Eigen::VectorXd::Zero(dom.nodeCount());
  for (int node : dom.rectRegion(dom.d1()).nodes) ind[node] = 1.0;

  double v = h_minus_one_of(dom, ind);
  double l2 = dom.h() * ind.norm();
  CHECK(v > 0);
  CHECK(v <= l2 * (1 + 1e-10));
  CHECK(h_minus_one_of(dom, (2.0 * ind).eval()) ==
        doctest::Approx(2.0 * v).epsilon(1e-12));

  // continuous Fourier transform of the indicator of the (half-cell widened)
  // rectangle, summed over the same padded-box frequencies
  const double pi = std::acos(-1.0);
  const double h = dom.h();
  const int mx = 4 * dom.nx(), my = 4 * dom.ny();
  const double sx = mx * h, sy = my * h;
  double a0 = dom.d1().i0 * h - 0.5 * h, a1 = dom.d1().i1 * h + 0.5 * h;
  auto axis = [&](double w) {
    if (w == 0) return std::complex<double>(a1 - a0, 0);
    std::complex<double> iw(0, w);
    return (std::exp(-iw * a0) - std::exp(-iw * a1)) / iw;
  };
  double acc = 0;
  for (int kx = 0; kx < mx; ++kx) {
    double wx = 2.0 * pi * ((2 * kx <= mx) ? kx : kx - mx) / sx;
    for (int ky = 0; ky < my; ++ky) {
      double wy = 2.0 * pi * ((2 * ky <= my) ? ky : ky - my) / sy;
      acc += std::norm(axis(wx) * axis(wy)) / (1.0 + wx * wx + wy * wy);
    }
  }
  double oracle = std::sqrt(acc / (sx * sy));
  CHECK(v == doctest::Approx(oracle).epsilon(0.02));

  // support violations are configuration errors
  Potential in = Potential::zero(dom, dom.d1(), 5.0);
  Potential out = Potential::zero(dom, dom.d1(), 5.0);
  out.q[dom.nodeId(1, 1)] = 1.0;
  CHECK_THROWS_AS(h_minus_one_distance(in, out, dom), ConfigError);
}

TEST_CASE("stability sweep is monotone in the perturbation size") {
  GridDomain dom = makeDomain(32, BoundarySide::South);
  Potential q0 = Potential::zero(dom, dom.d1(), 5.0);
  Potential pert = Potential::bump(dom, dom.d1(), 1.0, 5.0);
  std::vector<double> ts;
  for (int k = 1; k <= 6; ++k) ts.push_back(std::pow(2.0, -k));
  StabilitySweep sweep = stability_sweep(dom, q0, pert.q, dom.d1(), ts, 2);
  REQUIRE(sweep.rows.size() == ts.size());
  for (size_t r = 1; r < sweep.rows.size(); ++r) {
    CHECK_FALSE(sweep.rows[r].skipped);
    CHECK(sweep.rows[r].dtn_gap < sweep.rows[r - 1].dtn_gap);
    CHECK(sweep.rows[r].h_minus_one < sweep.rows[r - 1].h_minus_one);
  }
  CHECK(sweep.worst_symmetry <= 1e-9);
}

TEST_CASE("complex geometric optics vectors") {
  Eigen::Vector3d k(0, 0, 1), l(1, 0, 0), m(0, 1, 0);
  CGOVectors v = cgo_vectors(k, l, m, 1.0);
  double s = std::sqrt(0.75);
  CHECK(v.rho1[0] == std::complex<double>(0, s));
  CHECK(v.rho1[1] == std::complex<double>(1, 0));
  CHECK(v.rho1[2] == std::complex<double>(0, -0.5));

  auto bdot = [](const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];  // bilinear, no conjugate
  };
  CHECK(std::abs(bdot(v.rho1, v.rho1)) <= 1e-14);
  CHECK(std::abs(bdot(v.rho2, v.rho2)) <= 1e-14);
  Eigen::Vector3cd sum = v.rho1 + v.rho2;
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(sum[i] + std::complex<double>(0, k[i])) <= 1e-14);

  CHECK_THROWS_AS(cgo_vectors(k, l, m, 0.4), ConfigError);
  CHECK_THROWS_AS(cgo_vectors(k, 2.0 * l, m, 1.0), ConfigError);
  CHECK_THROWS_AS(cgo_vectors(k, l, (l + m).normalized(), 1.0), ConfigError);
}
