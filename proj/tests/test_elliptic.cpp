#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "runge/elliptic.hpp"
#include "runge/rng.hpp"
#include "runge/sobolev.hpp"

using namespace runge;

namespace {

GridDomain makeDomain(int n) {
  return build_grid(n, Layout{}, BoundarySide::South);
}

Eigen::VectorXd nodeField(const GridDomain& dom,
                          double (*f)(double, double)) {
  Eigen::VectorXd v(dom.nodeCount());
  for (int node = 0; node < dom.nodeCount(); ++node) {
    Eigen::Vector2d xy = dom.nodeXY(node);
    v[node] = f(xy.x(), xy.y());
  }
  return v;
}

Eigen::VectorXd loopTrace(const GridDomain& dom, const Eigen::VectorXd& full) {
  Eigen::VectorXd t(dom.loopLength());
  for (int p = 0; p < dom.loopLength(); ++p) t[p] = full[dom.boundaryLoop()[p]];
  return t;
}

}  // namespace

TEST_CASE("certificate approximates the first Dirichlet eigenvalue") {
  GridDomain dom = makeDomain(64);
  EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 0.0, 1.0));
  const double pi = std::acos(-1.0);
  CHECK(op.certificate() ==
        doctest::Approx(2.0 * pi * pi).epsilon(0.05));
}

TEST_CASE("tuning c onto the discrete eigenvalue trips the certificate") {
  GridDomain dom = makeDomain(32);
  const double pi = std::acos(-1.0);
  double n = dom.n();
  double lam1 = 8.0 * n * n * std::pow(std::sin(0.5 * pi / n), 2.0);
  CHECK_THROWS_AS(
      EllipticOperator(dom, Coefficients::constant(dom, 1.0, lam1, 20.0)),
      NumericalError);
}

TEST_CASE("harmonic quadratic is reproduced exactly") {
  GridDomain dom = makeDomain(32);
  EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 0.0, 1.0));
  Eigen::VectorXd exact =
      nodeField(dom, +[](double x, double y) { return x * x - y * y; });
  Eigen::VectorXd u = op.solve(Eigen::VectorXd::Zero(dom.nodeCount()),
                               loopTrace(dom, exact));
  CHECK((u - exact).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("manufactured solution converges at second order") {
  const double pi = std::acos(-1.0);
  auto maxErr = [&](int n) {
    GridDomain dom = makeDomain(n);
    EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 0.0, 1.0));
    Eigen::VectorXd exact = nodeField(dom, +[](double x, double y) {
      const double pi = std::acos(-1.0);
      return std::sin(pi * x) * std::sin(pi * y);
    });
    Eigen::VectorXd u = op.solve(-2.0 * pi * pi * exact,
                                 Eigen::VectorXd::Zero(dom.loopLength()));
    return (u - exact).lpNorm<Eigen::Infinity>();
  };
  double e32 = maxErr(32), e64 = maxErr(64);
  CHECK(e32 / e64 >= 3.5);
  CHECK(e32 / e64 <= 4.5);
}

TEST_CASE("conormal pairing of linear and constant fields") {
  GridDomain dom = makeDomain(32);
  EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 0.0, 1.0));
  DirichletSolve lin = solve_dirichlet(
      op, Eigen::VectorXd::Zero(dom.nodeCount()),
      loopTrace(dom, nodeField(dom, +[](double x, double) { return x; })));
  const CellRect& d1 = dom.d1();
  Eigen::VectorXd density = conormal_density(op, lin, d1, CurveSide::Inside);
  int w = d1.width(), ht = d1.height();
  for (int p = w + 1; p < w + ht; ++p)  // east side, corners excluded
    CHECK(density[p] == doctest::Approx(1.0).epsilon(0.05));
  for (int p = 2 * w + ht + 1; p < 2 * (w + ht); ++p)  // west side
    CHECK(density[p] == doctest::Approx(-1.0).epsilon(0.05));
  for (int p = 1; p < w; ++p)  // south side: normal orthogonal to gradient
    CHECK(std::abs(density[p]) <= 1e-10);

  DirichletSolve one = solve_dirichlet(
      op, Eigen::VectorXd::Zero(dom.nodeCount()),
      Eigen::VectorXd::Ones(dom.loopLength()));
  Eigen::VectorXd zero = conormal_pairing(op, one, d1, CurveSide::Inside);
  CHECK(zero.lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("two-sided conormal traces agree to first order") {
  auto mismatch = [](int n) {
    GridDomain dom = makeDomain(n);
    EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 1.0, 1.0));
    DirichletSolve s = solve_dirichlet(
        op, Eigen::VectorXd::Zero(dom.nodeCount()),
        loopTrace(dom, nodeField(dom, +[](double x, double y) {
                    return std::cos(x + 2 * y);
                  })));
    Eigen::VectorXd din = conormal_density(op, s, dom.d1(), CurveSide::Inside);
    Eigen::VectorXd dout =
        conormal_density(op, s, dom.d1(), CurveSide::Outside);
    // corner fluxes are geometrically one-sided; compare side interiors
    int w = dom.d1().width(), t = dom.d1().height();
    double worst = 0;
    auto upd = [&](int p) {
      worst = std::max(worst, std::abs(din[p] - dout[p]));
    };
    for (int p = 1; p < w; ++p) upd(p);
    for (int p = w + 1; p < w + t; ++p) upd(p);
    for (int p = w + t + 1; p < 2 * w + t; ++p) upd(p);
    for (int p = 2 * w + t + 1; p < 2 * (w + t); ++p) upd(p);
    return worst;
  };
  double m32 = mismatch(32), m64 = mismatch(64);
  CHECK(m32 > 0);
  CHECK(m32 / m64 >= 1.7);
  CHECK(m32 / m64 <= 2.3);
}

TEST_CASE("Green identity holds to rounding on random data") {
  GridDomain dom = makeDomain(32);
  EllipticOperator op(
      dom, Coefficients::checkerboard(dom, 0.5, 2.0, 2.0));
  Rng rng(11);
  Region all = dom.wholeRegion();
  for (int c = 0; c < 100; ++c) {
    DirichletSolve u = solve_dirichlet(op, rng.vector(dom.nodeCount(), -1, 1),
                                       rng.vector(dom.loopLength(), -1, 1));
    DirichletSolve w = solve_dirichlet(op, rng.vector(dom.nodeCount(), -1, 1),
                                       rng.vector(dom.loopLength(), -1, 1));
    double scale = h1_norm(dom, all, u.u) * h1_norm(dom, all, w.u) +
                   l2_norm(dom, all, u.source) * l2_norm(dom, all, w.u) +
                   l2_norm(dom, all, w.source) * l2_norm(dom, all, u.u);
    CHECK(green_residual(op, u, w) <= 1e-9 * scale);
  }
}

TEST_CASE("dual solve obeys the maximum principle") {
  GridDomain dom = makeDomain(32);
  EllipticOperator op(dom, Coefficients::constant(dom, 1.0, 0.0, 1.0));
  Region d1 = dom.rectRegion(dom.d1());
  Eigen::VectorXd h = Eigen::VectorXd::Ones(d1.nodes.size());
  DirichletSolve w = dual_source_solve(op, h);
  CHECK(w.u.maxCoeff() <= 1e-12);
  CHECK(w.u.minCoeff() < 0);
  for (int p : dom.boundaryLoop()) CHECK(w.u[p] == 0.0);
}

TEST_CASE("interior H1 norms are stable under refinement") {
  auto normAt = [](int n) {
    GridDomain dom = makeDomain(n);
    Eigen::VectorXd f = nodeField(dom, +[](double x, double y) {
      return std::sin(3 * x) * std::exp(y);
    });
    return h1_norm(dom, dom.rectRegion(dom.d1()), f);
  };
  CHECK(normAt(32) == doctest::Approx(normAt(64)).epsilon(0.10));
}

TEST_CASE("solve_on_rect reproduces harmonic boundary data") {
  GridDomain dom = makeDomain(32);
  Coefficients coeff = Coefficients::constant(dom, 1.0, 0.0, 1.0);
  Eigen::VectorXd exact =
      nodeField(dom, +[](double x, double y) { return x * x - y * y; });
  Eigen::VectorXd u = solve_on_rect(dom, coeff, dom.d1(), exact);
  for (int node : dom.rectRegion(dom.d1()).nodes)
    CHECK(u[node] == doctest::Approx(exact[node]).epsilon(1e-10));
  // vanishes outside the rectangle
  CHECK(u[dom.nodeId(0, 0)] == 0.0);
}
