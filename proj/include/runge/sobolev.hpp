#pragma once

#include <Eigen/Dense>

#include "runge/grid.hpp"

namespace runge {

enum class NormOrder { L2Interior, H1Interior, HhalfBoundary };

// Gram matrix of a discrete Sobolev inner product in the nodal basis of a
// region (interior orders) or of the boundary loop (Hhalf).  For Hhalf the
// eigenpairs of the periodic loop Laplacian used to build it are kept.
struct SobolevGram {
  NormOrder order;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;   // HhalfBoundary only
  Eigen::MatrixXd eigenvectors;  // HhalfBoundary only

  double squaredNorm(const Eigen::VectorXd& v) const {
    return v.dot(matrix * v);
  }
  double norm(const Eigen::VectorXd& v) const {
    return std::sqrt(std::max(0.0, squaredNorm(v)));
  }
};

SobolevGram gram(const GridDomain& dom, NormOrder order, const Region& region);
SobolevGram boundary_gram(const GridDomain& dom);  // Hhalf on the full loop

// Quadratic-form evaluation without materializing the Gram matrix; `values`
// is a full-lattice field.
double l2_norm(const GridDomain& dom, const Region& region,
               const Eigen::VectorXd& values);
double h1_norm(const GridDomain& dom, const Region& region,
               const Eigen::VectorXd& values);

// H^{1/2} Gram restricted to the gamma arc, with a cached factorization for
// dual-norm evaluations.  `fromPairing` takes functional values against the
// gamma nodal traces; `fromDensity` takes a pointwise trace density f (the
// pairing is the arclength-weighted sum h * f_b).
class GammaDual {
 public:
  explicit GammaDual(const GridDomain& dom);
  GammaDual(const GridDomain& dom, const SobolevGram& loopGram);

  const Eigen::MatrixXd& gram() const { return gram_; }
  double normOf(const Eigen::VectorXd& g) const {
    return std::sqrt(std::max(0.0, g.dot(gram_ * g)));
  }
  double fromPairing(const Eigen::VectorXd& pairing) const;
  double fromDensity(const Eigen::VectorXd& density_on_gamma) const;

 private:
  double h_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Dual H^{-1/2}(Gamma) norm of a trace density given on the full loop of D2
// (entries outside gamma do not pair and are ignored).
double dual_norm_on_gamma(const Eigen::VectorXd& density_on_loop,
                          const GridDomain& dom);

}  // namespace runge
