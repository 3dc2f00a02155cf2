#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "runge/restriction.hpp"
#include "runge/rng.hpp"

using namespace runge;

namespace {

struct Setup {
  GridDomain dom;
  Coefficients coeff;
  RestrictionOperator A;
  Setup(int n, BoundarySide side)
      : dom(build_grid(n, Layout{}, side)),
        coeff(Coefficients::constant(dom, 1.0, 0.0, 1.0)),
        A(dom, coeff, 2) {}
};

}  // namespace

TEST_CASE("constant boundary data restricts to the constant") {
  Setup s(32, BoundarySide::Full);
  Eigen::VectorXd g = Eigen::VectorXd::Ones(s.dom.gamma().size());
  Eigen::VectorXd h = s.A.apply(g);
  CHECK((h - Eigen::VectorXd::Ones(h.size())).lpNorm<Eigen::Infinity>() <=
        1e-10);
}

TEST_CASE("adjoint identity against the dual conormal pairing") {
  Setup s(32, BoundarySide::South);
  Rng rng(3);
  for (int c = 0; c < 5; ++c) {
    Eigen::VectorXd g = rng.vector(s.dom.gamma().size(), -1, 1);
    Eigen::VectorXd h = rng.vector(s.A.d1Region().nodes.size(), -1, 1);
    double lhs = s.A.l2PairingD1(s.A.apply(g), h);
    double rhs = g.dot(s.A.adjointPairing(h));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("Riesz-lifted adjoint has the dual norm of the raw pairing") {
  Setup s(32, BoundarySide::South);
  Rng rng(5);
  Eigen::VectorXd h = rng.vector(s.A.d1Region().nodes.size(), -1, 1);
  Eigen::VectorXd pairing = s.A.adjointPairing(h);
  Eigen::VectorXd star = s.A.adjoint(h);
  CHECK(s.A.inNorm(star) ==
        doctest::Approx(s.A.gammaDual().fromPairing(pairing)).epsilon(1e-9));
}

TEST_CASE("singular system: triples, orthonormality, injectivity") {
  Setup s(32, BoundarySide::South);
  SingularSystem sys = singular_system(s.A);
  REQUIRE(sys.count > 0);
  CHECK(sys.sigma[sys.count - 1] > 0);  // injectivity of A on gamma traces
  for (int j = 1; j < sys.count; ++j) CHECK(sys.sigma[j] <= sys.sigma[j - 1]);
  for (int j = 0; j < sys.count; ++j) {
    Eigen::VectorXd r =
        s.A.apply(sys.phi.col(j)) - sys.sigma[j] * sys.psi.col(j);
    CHECK(s.A.outNorm(r) <= 1e-8 * sys.sigma[0]);
  }
  int n = sys.count;
  Eigen::MatrixXd pin = sys.phi.transpose() * s.A.gramIn() * sys.phi;
  Eigen::MatrixXd pout = s.A.gramOutWeight() * sys.psi.transpose() * sys.psi;
  CHECK((pin - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() <=
        1e-10);
  CHECK((pout - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() <=
        1e-10);
}

TEST_CASE("range is dense when the whole boundary is accessible") {
  Setup s(32, BoundarySide::Full);
  SingularSystem sys = singular_system(s.A);
  Rng rng(17);
  // random discrete solutions on D1 project onto the mode span
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd trace = Eigen::VectorXd::Zero(s.dom.nodeCount());
    for (int node : rect_loop(s.dom, s.dom.d1()))
      trace[node] = rng.uniform(-1, 1);
    Eigen::VectorXd h =
        s.A.gatherD1(solve_on_rect(s.dom, s.coeff, s.dom.d1(), trace));
    Eigen::VectorXd beta = mode_coefficients(s.A, sys, h);
    double defect2 = h.squaredNorm() * s.A.gramOutWeight() - beta.squaredNorm();
    CHECK(std::sqrt(std::max(0.0, defect2)) <= 1e-6 * s.A.outNorm(h));
  }
}

TEST_CASE("spectral cutoff identities on in-range targets") {
  Setup s(32, BoundarySide::South);
  SingularSystem sys = singular_system(s.A);
  Rng rng(23);
  Eigen::VectorXd g = rng.vector(s.dom.gamma().size(), -1, 1);
  Eigen::VectorXd h = s.A.apply(g);
  double hn = s.A.outNorm(h);

  // alpha below every sigma keeps everything
  CutoffApproximant all = spectral_cutoff(s.A, sys, h, 0.5 * sys.sigma[sys.count - 1]);
  CHECK(s.A.outNorm(all.residual) <= 1e-8 * hn);

  // alpha above every sigma keeps nothing
  CutoffApproximant none = spectral_cutoff(s.A, sys, h, 2.0 * sys.sigma[0]);
  CHECK(none.boundary_norm == 0.0);
  CHECK(none.residual_norm == doctest::Approx(hn).epsilon(1e-8));

  // interior alpha: Pythagoras and the 1/alpha bound
  double alpha = std::sqrt(sys.sigma[0] * sys.sigma[sys.count - 1]);
  CutoffApproximant mid = spectral_cutoff(s.A, sys, h, alpha);
  CHECK(s.A.outNorm(mid.residual) ==
        doctest::Approx(mid.residual_norm).epsilon(1e-8));
  CHECK(s.A.inNorm(mid.g_alpha) ==
        doctest::Approx(mid.boundary_norm).epsilon(1e-10));
  CHECK(mid.boundary_norm <= hn / alpha * (1 + 1e-12));

  // non-solutions are rejected
  Eigen::VectorXd junk = rng.vector(s.A.d1Region().nodes.size(), -1, 1);
  CHECK_THROWS_AS(spectral_cutoff(s.A, sys, junk, alpha), ConfigError);
}

TEST_CASE("cost curve: monotone, Pareto-dominated by the cutoff") {
  Setup s(32, BoundarySide::South);
  SingularSystem sys = singular_system(s.A);
  Rng rng(29);
  Eigen::VectorXd h = s.A.apply(rng.vector(s.dom.gamma().size(), -1, 1));

  std::vector<double> eps;
  for (int k = 1; k <= 8; ++k) eps.push_back(std::pow(10.0, -k));
  auto rows = cost_curve(s.A, sys, h, eps, CostNormalization::InnerH1);
  REQUIRE(rows.size() == eps.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].saturated) continue;
    CHECK(rows[r].tikhonov_norm <= rows[r].boundary_norm * (1 + 1e-9));
    if (r > 0 && !rows[r - 1].saturated)
      CHECK(rows[r].boundary_norm >= rows[r - 1].boundary_norm - 1e-12);
  }
}

TEST_CASE("quantitative uniqueness chain on harmonic data") {
  Setup s(32, BoundarySide::South);
  SingularSystem sys = singular_system(s.A);
  const CellRect& d1 = s.dom.d1();
  double cx = 0.5 * (d1.i0 + d1.i1) * s.dom.h();
  double cy = 0.5 * (d1.j0 + d1.j1) * s.dom.h();
  Eigen::VectorXd trace = Eigen::VectorXd::Zero(s.dom.nodeCount());
  for (int node : rect_loop(s.dom, d1)) {
    Eigen::Vector2d xy = s.dom.nodeXY(node);
    double x = xy.x() - cx, y = xy.y() - cy;
    trace[node] = x * x - y * y;
  }
  Eigen::VectorXd h =
      s.A.gatherD1(solve_on_rect(s.dom, s.coeff, d1, trace));

  double ratio = s.A.outNorm(h) / s.A.h1NormD1(h);
  QwucReport good = qwuc_check(s.A, sys, h, 0.4 * ratio);
  CHECK(good.condition_met);
  CHECK(good.verified);
  CHECK(good.slack <= 1e-8);

  QwucReport bad = qwuc_check(s.A, sys, h, 10.0 * ratio);
  CHECK_FALSE(bad.condition_met);
}

TEST_CASE("ucp samples are positive and flux-dominated for constants") {
  Setup s(32, BoundarySide::South);
  Eigen::VectorXd h = Eigen::VectorXd::Ones(s.A.d1Region().nodes.size());
  CellRect window = s.dom.snapToCells(Rect{0.125, 0.875, 0.125, 0.25});
  UcpSample u = ucp_log_ratio(s.A, h, window);
  CHECK(u.h_l2 > 0);
  CHECK(u.flux_dual > 0);
  CHECK(u.w_h1_exterior > 0);
  CHECK(u.w_h1_window > 0);
  CHECK(u.w_h1_window <= u.w_h1_exterior * (1 + 1e-12));
}
