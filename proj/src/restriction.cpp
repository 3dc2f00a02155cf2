#include "runge/restriction.hpp"

#include <cmath>

#include "runge/parallel.hpp"

namespace runge {

RestrictionOperator::RestrictionOperator(const GridDomain& dom,
                                         const Coefficients& coeff, int threads)
    : op_(dom, coeff), d1_(dom.rectRegion(dom.d1())), dual_(dom) {
  const auto& gamma = dom.gamma();
  const int cols = static_cast<int>(gamma.size());
  const int rows = static_cast<int>(d1_.nodes.size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dom.nodeCount());
  matrix_.resize(rows, cols);
  parallel_for(cols, threads, [&](int j) {
    Eigen::VectorXd trace = Eigen::VectorXd::Zero(dom.loopLength());
    trace[gamma[j]] = 1.0;
    Eigen::VectorXd u = op_.solve(zero, trace);
    for (int r = 0; r < rows; ++r) matrix_(r, j) = u[d1_.nodes[r]];
  });
}

double RestrictionOperator::gramOutWeight() const {
  return domain().h() * domain().h();
}

Eigen::VectorXd RestrictionOperator::scatterD1(
    const Eigen::VectorXd& h_on_d1) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(domain().nodeCount());
  for (size_t k = 0; k < d1_.nodes.size(); ++k) full[d1_.nodes[k]] = h_on_d1[k];
  return full;
}

Eigen::VectorXd RestrictionOperator::gatherD1(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(d1_.nodes.size());
  for (size_t k = 0; k < d1_.nodes.size(); ++k) out[k] = full[d1_.nodes[k]];
  return out;
}

Eigen::VectorXd RestrictionOperator::adjointPairing(
    const Eigen::VectorXd& h_on_d1) const {
  DirichletSolve w = dual_source_solve(op_, h_on_d1);
  Eigen::VectorXd p = conormal_pairing(op_, w);
  const auto& gamma = domain().gamma();
  Eigen::VectorXd out(gamma.size());
  for (size_t k = 0; k < gamma.size(); ++k) out[k] = p[gamma[k]];
  return out;
}

Eigen::VectorXd RestrictionOperator::adjoint(
    const Eigen::VectorXd& h_on_d1) const {
  Eigen::VectorXd p = adjointPairing(h_on_d1);
  return gramIn().llt().solve(p);
}

double RestrictionOperator::l2PairingD1(const Eigen::VectorXd& u,
                                        const Eigen::VectorXd& v) const {
  return gramOutWeight() * u.dot(v);
}

double RestrictionOperator::h1NormD1(const Eigen::VectorXd& h_on_d1) const {
  return h1_norm(domain(), d1_, scatterD1(h_on_d1));
}

double RestrictionOperator::solutionResidual(const Eigen::VectorXd& h_on_d1,
                                             bool require) const {
  const auto& dom = domain();
  Eigen::VectorXd full = scatterD1(h_on_d1);
  Eigen::VectorXd r = op_.formMatrix() * full;
  const CellRect& d1 = dom.d1();
  double worst = 0;
  for (int j = d1.j0 + 1; j < d1.j1; ++j)
    for (int i = d1.i0 + 1; i < d1.i1; ++i)
      worst = std::max(worst, std::abs(r[dom.nodeId(i, j)]));
  double rowScale = 8.0 * op_.coefficients().bound +
                    dom.h() * dom.h() * op_.coefficients().bound;
  double scale = rowScale * std::max(1e-300, h_on_d1.lpNorm<Eigen::Infinity>());
  double rel = worst / scale;
  if (require && rel > 1e-8)
    throw ConfigError("field is not a discrete solution on D1");
  return rel;
}

SingularSystem singular_system(const RestrictionOperator& A) {
  const double h = A.domain().h();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.gramIn());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    throw NumericalError("input Gram eigendecomposition failed; condition " +
                         std::to_string(es.eigenvalues().maxCoeff() /
                                        es.eigenvalues().minCoeff()));
  Eigen::MatrixXd gmh = es.eigenvectors() *
                        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();

  // SVD of G_out^{1/2} A G_in^{-1/2} with G_out = h^2 I.
  Eigen::MatrixXd B = h * A.matrix() * gmh;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  int keep = 0;
  while (keep < s.size() && s[keep] > 1e-12 * s[0]) ++keep;
  if (keep == 0) throw NumericalError("restriction operator is numerically zero");

  SingularSystem sys;
  sys.count = keep;
  sys.sigma = s.head(keep);
  sys.phi = gmh * svd.matrixV().leftCols(keep);
  sys.psi = svd.matrixU().leftCols(keep) / h;
  return sys;
}

Eigen::VectorXd mode_coefficients(const RestrictionOperator& A,
                                  const SingularSystem& sys,
                                  const Eigen::VectorXd& h_on_d1) {
  return A.gramOutWeight() * (sys.psi.transpose() * h_on_d1);
}

CutoffApproximant spectral_cutoff(const RestrictionOperator& A,
                                  const SingularSystem& sys,
                                  const Eigen::VectorXd& h_on_d1, double alpha) {
  if (!(alpha > 0)) throw ConfigError("cutoff threshold must be positive");
  A.solutionResidual(h_on_d1, /*require=*/true);

  CutoffApproximant cut;
  cut.alpha = alpha;
  cut.beta = mode_coefficients(A, sys, h_on_d1);
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(sys.count);
  double bn2 = 0, rn2 = 0;
  for (int j = 0; j < sys.count; ++j) {
    if (sys.sigma[j] >= alpha) {
      coeff[j] = cut.beta[j] / sys.sigma[j];
      bn2 += coeff[j] * coeff[j];
    } else {
      rn2 += cut.beta[j] * cut.beta[j];
    }
  }
  cut.g_alpha = sys.phi * coeff;
  cut.residual = h_on_d1 - A.apply(cut.g_alpha);
  cut.boundary_norm = std::sqrt(bn2);
  cut.residual_norm = std::sqrt(rn2);
  return cut;
}

namespace {

struct DiagonalData {
  Eigen::VectorXd beta, sigma;
  double defect2 = 0;  // squared component of h outside the retained span
};

// Tikhonov Pareto point: minimal ||g||_{H1/2} with residual <= target.
// Diagonal in the singular basis; residual grows monotonically with lambda.
double tikhonov_norm(const DiagonalData& d, double target) {
  auto resid2 = [&](double loglam) {
    double lam = std::exp(loglam);
    double r2 = d.defect2;
    for (int j = 0; j < d.beta.size(); ++j) {
      double s2 = d.sigma[j] * d.sigma[j];
      double r = d.beta[j] * lam / (s2 + lam);
      r2 += r * r;
    }
    return r2;
  };
  double t2 = target * target;
  if (resid2(-745.0) > t2) return std::nan("");  // unreachable even at lambda->0
  double lo = -745.0, hi = 700.0;  // exp(>709) would overflow
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (resid2(mid) > t2 ? hi : lo) = mid;
  }
  double lam = std::exp(lo);
  double n2 = 0;
  for (int j = 0; j < d.beta.size(); ++j) {
    double s2 = d.sigma[j] * d.sigma[j];
    double c = d.sigma[j] * d.beta[j] / (s2 + lam);
    n2 += c * c;
  }
  return std::sqrt(n2);
}

}  // namespace

std::vector<CostCurveRow> cost_curve(const RestrictionOperator& A,
                                     const SingularSystem& sys,
                                     const Eigen::VectorXd& h_on_d1,
                                     const std::vector<double>& epsilons,
                                     CostNormalization normalization,
                                     std::optional<double> extended_h1) {
  A.solutionResidual(h_on_d1, /*require=*/true);
  double normalizer;
  if (normalization == CostNormalization::InnerH1) {
    normalizer = A.h1NormD1(h_on_d1);
  } else {
    if (!extended_h1)
      throw ConfigError("extended normalization needs ||h~||_{H1(Dtilde)}");
    normalizer = *extended_h1;
  }

  DiagonalData d;
  d.beta = mode_coefficients(A, sys, h_on_d1);
  d.sigma = sys.sigma;
  double hl2 = A.outNorm(h_on_d1);
  d.defect2 = std::max(0.0, hl2 * hl2 - d.beta.squaredNorm());

  // tail2[k] = sum_{j >= k} beta_j^2 + defect2
  Eigen::VectorXd tail2(sys.count + 1);
  tail2[sys.count] = d.defect2;
  for (int j = sys.count - 1; j >= 0; --j)
    tail2[j] = tail2[j + 1] + d.beta[j] * d.beta[j];

  std::vector<CostCurveRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    if (!(eps > 0) || eps >= 1)
      throw ConfigError("epsilon values must lie in (0, 1)");
    CostCurveRow row;
    row.epsilon = eps;
    double target = eps * normalizer;
    int k = sys.count;
    row.saturated = true;
    for (int cand = 0; cand <= sys.count; ++cand) {
      if (std::sqrt(tail2[cand]) <= target) {
        k = cand;
        row.saturated = false;
        break;
      }
    }
    row.alpha = (k == 0) ? 2.0 * sys.sigma[0] : sys.sigma[k - 1];
    double bn2 = 0;
    for (int j = 0; j < k; ++j) {
      double c = d.beta[j] / d.sigma[j];
      bn2 += c * c;
    }
    row.boundary_norm = std::sqrt(bn2);
    row.residual = std::sqrt(tail2[k]);
    double tik = tikhonov_norm(d, target);
    row.tikhonov_norm = std::isnan(tik) ? row.boundary_norm : tik;
    if (std::isnan(tik)) row.saturated = true;
    rows.push_back(row);
  }
  return rows;
}

CostFits cost_curve_fits(const std::vector<CostCurveRow>& rows, bool tikhonov) {
  std::vector<double> eps, m;
  for (const auto& r : rows) {
    if (r.saturated) continue;
    double v = tikhonov ? r.tikhonov_norm : r.boundary_norm;
    if (v <= 0) continue;
    eps.push_back(r.epsilon);
    m.push_back(v);
  }
  // central 60% of the usable range, smallest-to-largest epsilon order kept
  int n = static_cast<int>(eps.size());
  int drop = n / 5;
  if (n - 2 * drop < 4) drop = std::max(0, (n - 4) / 2);
  std::vector<double> ex(eps.begin() + drop, eps.end() - drop);
  std::vector<double> my(m.begin() + drop, m.end() - drop);
  CostFits fits;
  fits.poly = fit(ex, my, FitModel::PowerLaw);
  fits.loglog = fit(ex, my, FitModel::LogLogLine);
  return fits;
}

UcpSample ucp_log_ratio(const RestrictionOperator& A,
                        const Eigen::VectorXd& h_on_d1, const CellRect& window) {
  const auto& dom = A.domain();
  UcpSample s;
  s.h_l2 = A.outNorm(h_on_d1);
  if (s.h_l2 == 0) return s;

  DirichletSolve w = dual_source_solve(A.op(), h_on_d1);
  Eigen::VectorXd p = conormal_pairing(A.op(), w);
  const auto& gamma = dom.gamma();
  Eigen::VectorXd pg(gamma.size());
  for (size_t k = 0; k < gamma.size(); ++k) pg[k] = p[gamma[k]];
  s.flux_dual = A.gammaDual().fromPairing(pg);
  s.w_h1_exterior = h1_norm(dom, dom.complementRegion(dom.d1()), w.u);
  s.w_h1_window = h1_norm(dom, dom.rectRegion(window), w.u);
  return s;
}

QwucReport qwuc_check(const RestrictionOperator& A, const SingularSystem& sys,
                      const Eigen::VectorXd& h_on_d1, double epsilon) {
  QwucReport rep;
  rep.h_l2 = A.outNorm(h_on_d1);
  rep.h_h1 = A.h1NormD1(h_on_d1);
  rep.condition_met = epsilon * rep.h_h1 <= 0.5 * rep.h_l2;
  if (!rep.condition_met || rep.h_l2 == 0) return rep;

  // Smallest retained set realizing residual <= eps ||h||_{H1(D1)}.
  Eigen::VectorXd beta = mode_coefficients(A, sys, h_on_d1);
  double defect2 = std::max(0.0, rep.h_l2 * rep.h_l2 - beta.squaredNorm());
  double target = epsilon * rep.h_h1;
  double tail2 = defect2 + beta.squaredNorm();
  int k = 0;
  while (k < sys.count && std::sqrt(tail2) > target) {
    tail2 -= beta[k] * beta[k];
    ++k;
  }
  double alpha = (k == 0) ? 2.0 * sys.sigma[0] : sys.sigma[k - 1];
  CutoffApproximant cut = spectral_cutoff(A, sys, h_on_d1, alpha);

  Eigen::VectorXd u = A.apply(cut.g_alpha);
  Eigen::VectorXd pairing = A.adjointPairing(h_on_d1);
  double flux = A.gammaDual().fromPairing(pairing);

  rep.lhs = rep.h_l2 * rep.h_l2;
  rep.cross_term = A.inNorm(cut.g_alpha) * flux;
  rep.defect_term = A.outNorm(h_on_d1 - u) * rep.h_l2;
  rep.slack = (rep.lhs - rep.cross_term - rep.defect_term) / rep.lhs;
  rep.verified = rep.slack <= 1e-8;
  return rep;
}

}  // namespace runge
