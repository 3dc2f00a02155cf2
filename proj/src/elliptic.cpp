#include "runge/elliptic.hpp"

#include <cmath>

namespace runge {

Coefficients Coefficients::constant(const GridDomain& dom, double aval,
                                    double cval, double K) {
  Coefficients co;
  co.a = Eigen::VectorXd::Constant(dom.nodeCount(), aval);
  co.c = Eigen::VectorXd::Constant(dom.nodeCount(), cval);
  co.bound = K;
  co.validate();
  return co;
}

Coefficients Coefficients::checkerboard(const GridDomain& dom, double lo,
                                        double hi, double K) {
  Coefficients co;
  co.a.resize(dom.nodeCount());
  co.c = Eigen::VectorXd::Zero(dom.nodeCount());
  co.bound = K;
  for (int node = 0; node < dom.nodeCount(); ++node) {
    auto [i, j] = dom.nodeIJ(node);
    co.a[node] = ((i + j) % 2 == 0) ? lo : hi;
  }
  co.validate();
  return co;
}

Coefficients Coefficients::bump(const GridDomain& dom, const CellRect& support,
                                double height, double K) {
  Coefficients co = constant(dom, 1.0, 0.0, K);
  const double pi = std::acos(-1.0);
  double cx = 0.5 * (support.i0 + support.i1), wx = 0.5 * support.width();
  double cy = 0.5 * (support.j0 + support.j1), wy = 0.5 * support.height();
  for (int node = 0; node < dom.nodeCount(); ++node) {
    auto [i, j] = dom.nodeIJ(node);
    if (!support.strictlyContainsNode(i, j)) continue;
    double sx = std::cos(0.5 * pi * (i - cx) / wx);
    double sy = std::cos(0.5 * pi * (j - cy) / wy);
    co.c[node] = height * sx * sx * sy * sy;
  }
  co.validate();
  return co;
}

void Coefficients::validate() const {
  if (bound < 1.0) throw ConfigError("ellipticity bound K must be >= 1");
  if (a.size() != c.size()) throw ConfigError("coefficient field size mismatch");
  for (int i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(c[i]))
      throw ConfigError("coefficient fields must be finite");
    if (a[i] < 1.0 / bound - 1e-12 || a[i] > bound + 1e-12)
      throw ConfigError("a violates K^{-1} <= a <= K");
    if (std::abs(c[i]) > bound + 1e-12)
      throw ConfigError("c violates |c| <= K");
  }
}

EllipticOperator::EllipticOperator(const GridDomain& dom, Coefficients coeff)
    : dom_(&dom), coeff_(std::move(coeff)) {
  coeff_.validate();
  if (coeff_.a.size() != dom.nodeCount())
    throw ConfigError("coefficient fields must cover the lattice");

  const int nx = dom.nx(), ny = dom.ny();
  const double h2 = dom.h() * dom.h();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(8 * dom.nodeCount());
  auto addEdge = [&](int p, int q) {
    double ae = 0.5 * (coeff_.a[p] + coeff_.a[q]);
    trips.emplace_back(p, p, ae);
    trips.emplace_back(q, q, ae);
    trips.emplace_back(p, q, -ae);
    trips.emplace_back(q, p, -ae);
  };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) addEdge(dom.nodeId(i, j), dom.nodeId(i + 1, j));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) addEdge(dom.nodeId(i, j), dom.nodeId(i, j + 1));
  for (int node = 0; node < dom.nodeCount(); ++node)
    trips.emplace_back(node, node, -h2 * coeff_.c[node]);
  form_.resize(dom.nodeCount(), dom.nodeCount());
  form_.setFromTriplets(trips.begin(), trips.end());

  factorize();
  certify();
}

void EllipticOperator::factorize() {
  const auto& interior = dom_->interiorNodes();
  interiorPos_.assign(dom_->nodeCount(), -1);
  for (int k = 0; k < static_cast<int>(interior.size()); ++k)
    interiorPos_[interior[k]] = k;

  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < form_.outerSize(); ++col) {
    int jc = interiorPos_[col];
    if (jc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(form_, col); it; ++it) {
      int ir = interiorPos_[it.row()];
      if (ir >= 0) trips.emplace_back(ir, jc, it.value());
    }
  }
  interiorBlock_.resize(interior.size(), interior.size());
  interiorBlock_.setFromTriplets(trips.begin(), trips.end());
  interior_.compute(interiorBlock_);
  if (interior_.info() != Eigen::Success)
    throw NumericalError(
        "zero is (numerically) a Dirichlet eigenvalue: factorization failed");
}

void EllipticOperator::certify() {
  const int m = interiorBlock_.rows();
  const double h2 = dom_->h() * dom_->h();
  double normInf = 0;
  for (int col = 0; col < interiorBlock_.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(interiorBlock_, col); it;
         ++it)
      normInf = std::max(normInf, std::abs(it.value()));
  normInf *= 8;  // crude row-sum bound for the five-point stencil

  Eigen::VectorXd v = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
  double lam = v.dot(interiorBlock_ * v);
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd y = interior_.solve(v);
    if (!y.allFinite() || y.norm() == 0.0) {
      lam = 0;
      break;
    }
    v = y / y.norm();
    double next = v.dot(interiorBlock_ * v);
    bool done = std::abs(next - lam) <= 1e-6 * std::abs(next);
    lam = next;
    if (done && it > 2) break;
  }
  if (std::abs(lam) < 1e-8 * normInf)
    throw NumericalError(
        "zero is (numerically) a Dirichlet eigenvalue for L in D2");
  certificate_ = lam / h2;
}

Eigen::VectorXd EllipticOperator::solve(const Eigen::VectorXd& source,
                                        const Eigen::VectorXd& loop_trace) const {
  const auto& dom = *dom_;
  const auto& interior = dom.interiorNodes();
  const double h2 = dom.h() * dom.h();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dom.nodeCount());
  const auto& loop = dom.boundaryLoop();
  for (int p = 0; p < dom.loopLength(); ++p) u[loop[p]] = loop_trace[p];

  Eigen::VectorXd coupled = form_ * u;
  Eigen::VectorXd rhs(interior.size());
  for (int k = 0; k < static_cast<int>(interior.size()); ++k)
    rhs[k] = -h2 * source[interior[k]] - coupled[interior[k]];
  Eigen::VectorXd ui = interior_.solve(rhs);
  if (!ui.allFinite()) throw NumericalError("Dirichlet solve returned non-finite values");
  for (int k = 0; k < static_cast<int>(interior.size()); ++k)
    u[interior[k]] = ui[k];
  return u;
}

DirichletSolve solve_dirichlet(const EllipticOperator& op,
                               const Eigen::VectorXd& source,
                               const Eigen::VectorXd& loop_trace) {
  const auto& dom = op.domain();
  DirichletSolve s;
  s.u = op.solve(source, loop_trace);
  s.source = source;
  s.boundary = loop_trace;

  const double h2 = dom.h() * dom.h();
  Eigen::VectorXd r = op.formMatrix() * s.u;
  double num = 0;
  for (int node : dom.interiorNodes())
    num = std::max(num, std::abs(r[node] + h2 * source[node]));
  double scale = std::max({1e-300, s.u.lpNorm<Eigen::Infinity>(),
                           h2 * source.lpNorm<Eigen::Infinity>()});
  s.residual_norm = num / scale;
  return s;
}

DirichletSolve dual_source_solve(const EllipticOperator& op,
                                 const Eigen::VectorXd& h_on_d1) {
  const auto& dom = op.domain();
  Region d1 = dom.rectRegion(dom.d1());
  if (h_on_d1.size() != static_cast<int>(d1.nodes.size()))
    throw ConfigError("dual source must be indexed by the D1 region nodes");
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dom.nodeCount());
  for (int k = 0; k < h_on_d1.size(); ++k) F[d1.nodes[k]] = h_on_d1[k];
  return solve_dirichlet(op, F, Eigen::VectorXd::Zero(dom.loopLength()));
}

std::vector<int> rect_loop(const GridDomain& dom, const CellRect& r) {
  std::vector<int> loop;
  for (int i = r.i0; i < r.i1; ++i) loop.push_back(dom.nodeId(i, r.j0));
  for (int j = r.j0; j < r.j1; ++j) loop.push_back(dom.nodeId(r.i1, j));
  for (int i = r.i1; i > r.i0; --i) loop.push_back(dom.nodeId(i, r.j1));
  for (int j = r.j1; j > r.j0; --j) loop.push_back(dom.nodeId(r.i0, j));
  return loop;
}

Eigen::VectorXd conormal_pairing(const EllipticOperator& op,
                                 const DirichletSolve& s, const CellRect& rect,
                                 CurveSide side) {
  const auto& dom = op.domain();
  if (rect.i0 < 0 || rect.j0 < 0 || rect.i1 > dom.nx() || rect.j1 > dom.ny())
    throw ConfigError("curve rectangle leaves the lattice");
  const double h2 = dom.h() * dom.h();
  const auto& a = op.coefficients().a;
  const auto& c = op.coefficients().c;
  auto inRect = [&](int i, int j) { return rect.containsNode(i, j); };
  auto inComp = [&](int i, int j) { return !rect.strictlyContainsNode(i, j); };

  std::vector<int> loop = rect_loop(dom, rect);
  Eigen::VectorXd p(loop.size());
  for (size_t k = 0; k < loop.size(); ++k) {
    int b = loop[k];
    auto [i, j] = dom.nodeIJ(b);
    double v = h2 * (s.source[b] - c[b] * s.u[b]);
    const std::array<std::array<int, 2>, 4> nb{{{i + 1, j}, {i - 1, j},
                                                {i, j + 1}, {i, j - 1}}};
    for (auto [ia, ja] : nb) {
      if (ia < 0 || ia > dom.nx() || ja < 0 || ja > dom.ny()) continue;
      bool keep = (side == CurveSide::Inside)
                      ? (inRect(i, j) && inRect(ia, ja))
                      : (inComp(i, j) && inComp(ia, ja));
      if (!keep) continue;
      int q = dom.nodeId(ia, ja);
      double ae = 0.5 * (a[b] + a[q]);
      v += ae * (s.u[b] - s.u[q]);
    }
    p[k] = (side == CurveSide::Inside) ? v : -v;
  }
  return p;
}

Eigen::VectorXd conormal_pairing(const EllipticOperator& op,
                                 const DirichletSolve& s) {
  const auto& dom = op.domain();
  const double h2 = dom.h() * dom.h();
  Eigen::VectorXd r = op.formMatrix() * s.u;
  const auto& loop = dom.boundaryLoop();
  Eigen::VectorXd p(loop.size());
  for (size_t k = 0; k < loop.size(); ++k)
    p[k] = r[loop[k]] + h2 * s.source[loop[k]];
  return p;
}

Eigen::VectorXd conormal_density(const EllipticOperator& op,
                                 const DirichletSolve& s, const CellRect& rect,
                                 CurveSide side) {
  return conormal_pairing(op, s, rect, side) / op.domain().h();
}

double green_residual(const EllipticOperator& op, const DirichletSolve& u,
                      const DirichletSolve& w) {
  const auto& dom = op.domain();
  const double h2 = dom.h() * dom.h();
  double p1 = h2 * u.source.dot(w.u);
  double p2 = h2 * u.u.dot(w.source);
  Eigen::VectorXd du = conormal_pairing(op, u);
  Eigen::VectorXd dw = conormal_pairing(op, w);
  const auto& loop = dom.boundaryLoop();
  double b1 = 0, b2 = 0;
  for (size_t k = 0; k < loop.size(); ++k) {
    b1 += du[k] * w.u[loop[k]];
    b2 += u.u[loop[k]] * dw[k];
  }
  return std::abs(p1 - p2 - b1 + b2);
}

Eigen::VectorXd solve_on_rect(const GridDomain& dom, const Coefficients& coeff,
                              const CellRect& rect,
                              const Eigen::VectorXd& boundary_full) {
  const int mi = rect.width(), mj = rect.height();
  if (mi < 2 || mj < 2) throw ConfigError("sub-rectangle has no interior nodes");
  auto local = [&](int i, int j) { return j * (mi + 1) + i; };
  auto global = [&](int i, int j) { return dom.nodeId(rect.i0 + i, rect.j0 + j); };

  std::vector<int> interior;
  for (int j = 1; j < mj; ++j)
    for (int i = 1; i < mi; ++i) interior.push_back(local(i, j));
  std::vector<int> pos((mi + 1) * (mj + 1), -1);
  for (int k = 0; k < static_cast<int>(interior.size()); ++k)
    pos[interior[k]] = k;

  const double h2 = dom.h() * dom.h();
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd uloc = Eigen::VectorXd::Zero((mi + 1) * (mj + 1));
  for (int j = 0; j <= mj; ++j)
    for (int i = 0; i <= mi; ++i)
      if (i == 0 || i == mi || j == 0 || j == mj)
        uloc[local(i, j)] = boundary_full[global(i, j)];

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(interior.size());
  auto addEdge = [&](int i0, int j0, int i1, int j1) {
    int p = local(i0, j0), q = local(i1, j1);
    double ae = 0.5 * (coeff.a[global(i0, j0)] + coeff.a[global(i1, j1)]);
    for (auto [r, s] : {std::pair{p, q}, std::pair{q, p}}) {
      if (pos[r] < 0) continue;
      trips.emplace_back(pos[r], pos[r], ae);
      if (pos[s] >= 0)
        trips.emplace_back(pos[r], pos[s], -ae);
      else
        rhs[pos[r]] += ae * uloc[s];
    }
  };
  for (int j = 0; j <= mj; ++j)
    for (int i = 0; i < mi; ++i) addEdge(i, j, i + 1, j);
  for (int j = 0; j < mj; ++j)
    for (int i = 0; i <= mi; ++i) addEdge(i, j, i, j + 1);
  for (int k = 0; k < static_cast<int>(interior.size()); ++k) {
    auto [li, lj] = std::pair{interior[k] % (mi + 1), interior[k] / (mi + 1)};
    trips.emplace_back(k, k, -h2 * coeff.c[global(li, lj)]);
  }

  Eigen::SparseMatrix<double> K(interior.size(), interior.size());
  K.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("sub-rectangle Dirichlet factorization failed");
  Eigen::VectorXd ui = ldlt.solve(rhs);
  if (!ui.allFinite())
    throw NumericalError("sub-rectangle Dirichlet solve failed");
  for (int k = 0; k < static_cast<int>(interior.size()); ++k)
    uloc[interior[k]] = ui[k];

  Eigen::VectorXd out = Eigen::VectorXd::Zero(dom.nodeCount());
  for (int j = 0; j <= mj; ++j)
    for (int i = 0; i <= mi; ++i) out[global(i, j)] = uloc[local(i, j)];
  return out;
}

}  // namespace runge
