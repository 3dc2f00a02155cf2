#include "runge/calderon.hpp"

#include <cmath>
#include <complex>

#include "runge/parallel.hpp"

namespace runge {

Potential Potential::zero(const GridDomain& dom, const CellRect& support,
                          double M) {
  Potential p;
  p.q = Eigen::VectorXd::Zero(dom.nodeCount());
  p.bound = M;
  p.support = support;
  p.validate(dom);
  return p;
}

Potential Potential::bump(const GridDomain& dom, const CellRect& support,
                          double height, double M) {
  Potential p = zero(dom, support, M);
  const double pi = std::acos(-1.0);
  double cx = 0.5 * (support.i0 + support.i1), wx = 0.5 * support.width();
  double cy = 0.5 * (support.j0 + support.j1), wy = 0.5 * support.height();
  for (int node = 0; node < dom.nodeCount(); ++node) {
    auto [i, j] = dom.nodeIJ(node);
    if (!support.strictlyContainsNode(i, j)) continue;
    double sx = std::cos(0.5 * pi * (i - cx) / wx);
    double sy = std::cos(0.5 * pi * (j - cy) / wy);
    p.q[node] = height * sx * sx * sy * sy;
  }
  p.validate(dom);
  return p;
}

void Potential::validate(const GridDomain& dom) const {
  if (q.size() != dom.nodeCount())
    throw ConfigError("potential must cover the lattice");
  if (q.lpNorm<Eigen::Infinity>() > bound + 1e-12)
    throw ConfigError("potential violates |q| <= M");
}

LocalDtN dtn_local(const GridDomain& dom, const Potential& q, int threads) {
  q.validate(dom);
  Coefficients coeff;
  coeff.a = Eigen::VectorXd::Constant(dom.nodeCount(), 1.0);
  coeff.c = -q.q;
  coeff.bound = std::max(1.0, q.bound);
  EllipticOperator op(dom, coeff);  // certificate enforced here

  const auto& gamma = dom.gamma();
  const auto& loop = dom.boundaryLoop();
  const int m = static_cast<int>(gamma.size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.nodeCount());

  LocalDtN dtn;
  dtn.matrix.resize(m, m);
  parallel_for(m, threads, [&](int j) {
    Eigen::VectorXd trace = Eigen::VectorXd::Zero(dom.loopLength());
    trace[gamma[j]] = 1.0;
    Eigen::VectorXd u = op.solve(zero, trace);
    Eigen::VectorXd r = op.formMatrix() * u;
    for (int b = 0; b < m; ++b) dtn.matrix(b, j) = r[loop[gamma[b]]];
  });

  SobolevGram loopGram = boundary_gram(dom);
  GammaDual dual(dom, loopGram);
  dtn.gram_in = dual.gram();
  dtn.gram_dual = dual.gram();
  double scale = std::max(1e-300, dtn.matrix.lpNorm<Eigen::Infinity>());
  dtn.symmetry_residual =
      (dtn.matrix - dtn.matrix.transpose()).lpNorm<Eigen::Infinity>() / scale;
  return dtn;
}

namespace {

Eigen::MatrixXd inverseSqrt(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    throw NumericalError("Gram matrix not positive definite");
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

double dtn_gap_norm(const LocalDtN& L1, const LocalDtN& L2) {
  if (L1.matrix.rows() != L2.matrix.rows())
    throw ConfigError("DtN maps live on different arcs");
  Eigen::MatrixXd B = inverseSqrt(L1.gram_dual) * (L1.matrix - L2.matrix) *
                      inverseSqrt(L1.gram_in);
  if (B.lpNorm<Eigen::Infinity>() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  return svd.singularValues()[0];
}

double h_minus_one_of(const GridDomain& dom, const Eigen::VectorXd& diff_full) {
  using Cplx = std::complex<double>;
  const int nx = dom.nx(), ny = dom.ny();
  const int mx = 4 * nx, my = 4 * ny;
  const double h = dom.h();
  const double pi = std::acos(-1.0);

  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(mx, my);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) Q(i, j) = diff_full[dom.nodeId(i, j)];

  auto dft = [&](int m) {
    Eigen::MatrixXcd W(m, m);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        W(k, i) = std::exp(Cplx(0, -2.0 * pi * k * i / m));
    return W;
  };
  Eigen::MatrixXcd F = dft(mx) * Q * dft(my).transpose();
  F *= h * h;

  auto wavenumber = [&](int k, int m, double side) {
    int f = (2 * k <= m) ? k : k - m;
    return 2.0 * pi * f / side;
  };
  const double sx = mx * h, sy = my * h;  // padded box sides
  double val = 0;
  for (int kx = 0; kx < mx; ++kx) {
    double wx = wavenumber(kx, mx, sx);
    for (int ky = 0; ky < my; ++ky) {
      double wy = wavenumber(ky, my, sy);
      val += std::norm(F(kx, ky)) / (1.0 + wx * wx + wy * wy);
    }
  }
  return std::sqrt(val / (sx * sy));
}

double h_minus_one_distance(const Potential& q1, const Potential& q2,
                            const GridDomain& dom) {
  Eigen::VectorXd diff = q1.q - q2.q;
  double scale = std::max(1e-300, diff.lpNorm<Eigen::Infinity>());
  for (int node = 0; node < dom.nodeCount(); ++node) {
    auto [i, j] = dom.nodeIJ(node);
    if (!q1.support.containsNode(i, j) && std::abs(diff[node]) > 1e-14 * scale)
      throw ConfigError("q1 - q2 is not supported in the support rectangle");
  }
  return h_minus_one_of(dom, diff);
}

StabilitySweep stability_sweep(const GridDomain& dom, const Potential& q1,
                               const Eigen::VectorXd& perturbation_full,
                               const CellRect& support,
                               const std::vector<double>& t_values,
                               int threads) {
  StabilitySweep sweep;
  LocalDtN base = dtn_local(dom, q1, threads);
  sweep.worst_symmetry = base.symmetry_residual;

  std::vector<double> xs, ys;
  for (double t : t_values) {
    StabilityRow row;
    row.t = t;
    if (t == 0) {
      sweep.rows.push_back(row);
      continue;
    }
    Potential q2;
    q2.q = q1.q + t * perturbation_full;
    q2.bound = q1.bound;
    q2.support = support;
    try {
      LocalDtN dt = dtn_local(dom, q2, threads);
      sweep.worst_symmetry = std::max(sweep.worst_symmetry,
                                      dt.symmetry_residual);
      row.dtn_gap = dtn_gap_norm(dt, base);
      row.h_minus_one = h_minus_one_distance(q2, q1, dom);
    } catch (const NumericalError&) {
      row.skipped = true;
      sweep.rows.push_back(row);
      continue;
    }
    row.in_fit = row.dtn_gap > 0 && row.dtn_gap < 1;
    if (row.in_fit) {
      xs.push_back(row.dtn_gap);
      ys.push_back(row.h_minus_one);
    }
    sweep.rows.push_back(row);
  }
  sweep.fit = fit(xs, ys, FitModel::LogModulus);
  return sweep;
}

CGOVectors cgo_vectors(const Eigen::Vector3d& k, const Eigen::Vector3d& l,
                       const Eigen::Vector3d& m, double tau) {
  const double tol = 1e-12;
  if (std::abs(l.norm() - 1) > tol || std::abs(m.norm() - 1) > tol)
    throw ConfigError("l and m must be unit vectors");
  if (std::abs(k.dot(l)) > tol * std::max(1.0, k.norm()) ||
      std::abs(k.dot(m)) > tol * std::max(1.0, k.norm()) ||
      std::abs(l.dot(m)) > tol)
    throw ConfigError("{k, l, m} must be mutually orthogonal");
  if (tau < 0.5 * k.norm())
    throw ConfigError("tau must satisfy tau >= |k|/2");

  CGOVectors v;
  v.k = k;
  v.l = l;
  v.m = m;
  v.tau = tau;
  double s = std::sqrt(std::max(0.0, tau * tau - 0.25 * k.squaredNorm()));
  using Cplx = std::complex<double>;
  // exact error of a floating-point addition (Knuth's TwoSum)
  auto two_sum = [](double a, double b, double& sum, double& err) {
    sum = a + b;
    double t = sum - a;
    err = (a - (sum - t)) + (b - t);
  };
  for (int i = 0; i < 3; ++i) {
    double im1 = -0.5 * k[i] + s * l[i];
    double im2 = -k[i] - im1;
    // nudge im1 by at most an ulp so that im1 + im2 == -k[i] exactly; the
    // real parts +-tau m[i] already cancel exactly
    for (int it = 0; it < 8; ++it) {
      double sum, err;
      two_sum(im1, im2, sum, err);
      if (sum == -k[i] && err == 0) break;
      im1 += (-k[i] - sum) - err;
      im2 = -k[i] - im1;
    }
    v.rho1[i] = Cplx(tau * m[i], im1);
    v.rho2[i] = Cplx(-tau * m[i], im2);
  }
  return v;
}

}  // namespace runge
