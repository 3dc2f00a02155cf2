#include "runge/sobolev.hpp"

#include <cmath>
#include <unordered_map>

namespace runge {

namespace {

// Positions of region nodes in the region ordering.
std::unordered_map<int, int> indexOf(const Region& region) {
  std::unordered_map<int, int> pos;
  pos.reserve(region.nodes.size());
  for (int k = 0; k < static_cast<int>(region.nodes.size()); ++k)
    pos.emplace(region.nodes[k], k);
  return pos;
}

}  // namespace

SobolevGram gram(const GridDomain& dom, NormOrder order, const Region& region) {
  if (order == NormOrder::HhalfBoundary)
    return boundary_gram(dom);

  const int m = static_cast<int>(region.nodes.size());
  const double mass = dom.h() * dom.h();
  SobolevGram g;
  g.order = order;
  g.matrix = Eigen::MatrixXd::Zero(m, m);
  g.matrix.diagonal().setConstant(mass);
  if (order == NormOrder::H1Interior) {
    auto pos = indexOf(region);
    for (const auto& e : region.edges) {
      int p = pos.at(e[0]), q = pos.at(e[1]);
      g.matrix(p, p) += 1.0;
      g.matrix(q, q) += 1.0;
      g.matrix(p, q) -= 1.0;
      g.matrix(q, p) -= 1.0;
    }
  }
  return g;
}

SobolevGram boundary_gram(const GridDomain& dom) {
  const int P = dom.loopLength();
  const double h = dom.h();
  // Periodic second-difference operator on the arclength-parametrized loop.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(P, P);
  for (int i = 0; i < P; ++i) {
    D(i, i) = 2.0;
    D(i, (i + 1) % P) -= 1.0;
    D(i, (i + P - 1) % P) -= 1.0;
  }
  D /= h * h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  if (es.info() != Eigen::Success)
    throw NumericalError("boundary Laplacian eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  // deflate the constant mode: solver noise on the zero eigenvalue would
  // otherwise leak into sqrt(lambda) at the 1e-6 level
  double tiny = 1e-8 * lam.maxCoeff();
  lam = (lam.array() < tiny).select(0.0, lam);
  const Eigen::MatrixXd& V = es.eigenvectors();

  SobolevGram g;
  g.order = NormOrder::HhalfBoundary;
  g.eigenvalues = lam;
  g.eigenvectors = V;
  Eigen::VectorXd w = (1.0 + lam.array().sqrt()) * h;
  g.matrix = V * w.asDiagonal() * V.transpose();
  return g;
}

double l2_norm(const GridDomain& dom, const Region& region,
               const Eigen::VectorXd& values) {
  double s = 0;
  for (int node : region.nodes) s += values[node] * values[node];
  return dom.h() * std::sqrt(s);
}

double h1_norm(const GridDomain& dom, const Region& region,
               const Eigen::VectorXd& values) {
  double s = 0;
  for (int node : region.nodes) s += values[node] * values[node];
  s *= dom.h() * dom.h();
  for (const auto& e : region.edges) {
    double d = values[e[0]] - values[e[1]];
    s += d * d;
  }
  return std::sqrt(s);
}

GammaDual::GammaDual(const GridDomain& dom)
    : GammaDual(dom, boundary_gram(dom)) {}

GammaDual::GammaDual(const GridDomain& dom, const SobolevGram& loopGram)
    : h_(dom.h()) {
  const auto& gamma = dom.gamma();
  const int m = static_cast<int>(gamma.size());
  gram_.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) gram_(a, b) = loopGram.matrix(gamma[a], gamma[b]);
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success)
    throw NumericalError("gamma-restricted H^{1/2} Gram not positive definite");
}

double GammaDual::fromPairing(const Eigen::VectorXd& pairing) const {
  return std::sqrt(std::max(0.0, pairing.dot(llt_.solve(pairing))));
}

double GammaDual::fromDensity(const Eigen::VectorXd& density_on_gamma) const {
  return fromPairing(h_ * density_on_gamma);
}

double dual_norm_on_gamma(const Eigen::VectorXd& density_on_loop,
                          const GridDomain& dom) {
  GammaDual dual(dom);
  const auto& gamma = dom.gamma();
  Eigen::VectorXd f(gamma.size());
  for (int k = 0; k < static_cast<int>(gamma.size()); ++k)
    f[k] = density_on_loop[gamma[k]];
  return dual.fromDensity(f);
}

}  // namespace runge
