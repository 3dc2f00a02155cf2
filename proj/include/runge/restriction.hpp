#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "runge/elliptic.hpp"
#include "runge/fit.hpp"
#include "runge/grid.hpp"
#include "runge/sobolev.hpp"

namespace runge {

// Discrete restriction operator: gamma-supported boundary trace coefficients
// to nodal values on the closed D1 rectangle.  Columns are Dirichlet solves
// with nodal hat data on gamma; the output inner product is the lumped
// L2(D1) Gram h^2 * I, the input one the gamma-restricted H^{1/2} Gram.
class RestrictionOperator {
 public:
  RestrictionOperator(const GridDomain& dom, const Coefficients& coeff,
                      int threads = 1);

  const GridDomain& domain() const { return op_.domain(); }
  const EllipticOperator& op() const { return op_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Region& d1Region() const { return d1_; }
  const GammaDual& gammaDual() const { return dual_; }
  const Eigen::MatrixXd& gramIn() const { return dual_.gram(); }
  double gramOutWeight() const;  // h^2

  Eigen::VectorXd apply(const Eigen::VectorXd& g_gamma) const {
    return matrix_ * g_gamma;
  }
  // A'h: conormal pairing on gamma of the dual solve with source h chi_D1.
  Eigen::VectorXd adjointPairing(const Eigen::VectorXd& h_on_d1) const;
  // A*h = G_in^{-1} A'h (Riesz-lifted adjoint, gamma coefficients).
  Eigen::VectorXd adjoint(const Eigen::VectorXd& h_on_d1) const;

  double inNorm(const Eigen::VectorXd& g_gamma) const {
    return dual_.normOf(g_gamma);
  }
  double outNorm(const Eigen::VectorXd& h_on_d1) const {
    return domain().h() * h_on_d1.norm();
  }
  double l2PairingD1(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double h1NormD1(const Eigen::VectorXd& h_on_d1) const;

  // Interior-equation residual of h as a discrete solution on D1; throws
  // ConfigError above 1e-8 relative when `require` is set.
  double solutionResidual(const Eigen::VectorXd& h_on_d1,
                          bool require = false) const;

  Eigen::VectorXd scatterD1(const Eigen::VectorXd& h_on_d1) const;
  Eigen::VectorXd gatherD1(const Eigen::VectorXd& full) const;

 private:
  EllipticOperator op_;
  Region d1_;
  GammaDual dual_;
  Eigen::MatrixXd matrix_;
};

// Lemma 4.1 triples, sorted by decreasing sigma; phi columns are gram_in-
// orthonormal gamma coefficients, psi columns gram_out-orthonormal D1 fields.
struct SingularSystem {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd psi;
  int count = 0;
};

SingularSystem singular_system(const RestrictionOperator& A);

// Expansion coefficients beta_j = (h, psi_j)_{L2(D1)}.
Eigen::VectorXd mode_coefficients(const RestrictionOperator& A,
                                  const SingularSystem& sys,
                                  const Eigen::VectorXd& h_on_d1);

struct CutoffApproximant {
  double alpha = 0;
  Eigen::VectorXd beta;      // all retained modes
  Eigen::VectorXd g_alpha;   // gamma coefficients of R_alpha h
  Eigen::VectorXd residual;  // h - A g_alpha on D1
  double boundary_norm = 0;  // sqrt(sum_{sigma>=alpha} beta^2/sigma^2)
  double residual_norm = 0;  // sqrt(sum_{sigma<alpha} beta^2)
};

CutoffApproximant spectral_cutoff(const RestrictionOperator& A,
                                  const SingularSystem& sys,
                                  const Eigen::VectorXd& h_on_d1, double alpha);

enum class CostNormalization { InnerH1, ExtendedH1 };

struct CostCurveRow {
  double epsilon = 0;
  double alpha = 0;
  double residual = 0;
  double boundary_norm = 0;
  double tikhonov_norm = 0;
  bool saturated = false;
};

// M(eps) for the cutoff family plus the exact Tikhonov Pareto value at the
// same residual target eps * normalizer.  The normalizer is ||h||_{H1(D1)}
// or a caller-provided ||h~||_{H1(Dtilde)}.
std::vector<CostCurveRow> cost_curve(const RestrictionOperator& A,
                                     const SingularSystem& sys,
                                     const Eigen::VectorXd& h_on_d1,
                                     const std::vector<double>& epsilons,
                                     CostNormalization normalization,
                                     std::optional<double> extended_h1 = {});

// mu-hat fits over the central 60% of the non-saturated rows.
struct CostFits {
  FitResult poly;    // log M vs log(1/eps)
  FitResult loglog;  // log log M vs log(1/eps)
};
CostFits cost_curve_fits(const std::vector<CostCurveRow>& rows,
                         bool tikhonov = false);

struct UcpSample {
  double h_l2 = 0;           // ||h||_{L2(D1)}
  double flux_dual = 0;      // ||dnu w||_{H^{-1/2}(Gamma)}
  double w_h1_exterior = 0;  // ||w||_{H1(D2 minus open D1)}
  double w_h1_window = 0;    // ||w||_{H1(G)}
};

UcpSample ucp_log_ratio(const RestrictionOperator& A,
                        const Eigen::VectorXd& h_on_d1, const CellRect& window);

struct QwucReport {
  bool condition_met = false;  // eps ||h||_{H1(D1)} <= 1/2 ||h||_{L2(D1)}
  double h_l2 = 0, h_h1 = 0;
  double lhs = 0;          // ||h||^2
  double cross_term = 0;   // ||g_alpha||_{H1/2} * ||dnu w||_{H-1/2(Gamma)}
  double defect_term = 0;  // ||u - h||_{L2} * ||h||_{L2}
  double slack = 0;        // (lhs - rhs) / lhs
  bool verified = false;
};

QwucReport qwuc_check(const RestrictionOperator& A, const SingularSystem& sys,
                      const Eigen::VectorXd& h_on_d1, double epsilon);

}  // namespace runge
