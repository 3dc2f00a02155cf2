#pragma once

#include <Eigen/Dense>

#include <vector>

#include "runge/elliptic.hpp"
#include "runge/fit.hpp"
#include "runge/grid.hpp"
#include "runge/sobolev.hpp"

namespace runge {

// Schrodinger potential for (-Delta + q)u = 0 with sup bound M; stability
// experiments additionally require perturbations to live in support.
struct Potential {
  Eigen::VectorXd q;  // full lattice
  double bound = 1.0;
  CellRect support;

  static Potential zero(const GridDomain& dom, const CellRect& support,
                        double M);
  // cos^2 bump of the given height on the open support rectangle.
  static Potential bump(const GridDomain& dom, const CellRect& support,
                        double height, double M);
  void validate(const GridDomain& dom) const;
};

// Local Dirichlet-to-Neumann map on gamma in the nodal basis; entries are
// conormal pairings (arclength-integrated), so the matrix is symmetric.
// The two Grams are kept separately: gram_in measures H^{1/2}(Gamma) inputs,
// gram_dual induces the H^{-1/2}(Gamma) output norm.
struct LocalDtN {
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd gram_in;
  Eigen::MatrixXd gram_dual;
  double symmetry_residual = 0;
};

LocalDtN dtn_local(const GridDomain& dom, const Potential& q, int threads = 1);

// ||L1 - L2||_{H~^{1/2}(Gamma) -> H^{-1/2}(Gamma)}: largest generalized
// singular value between gram_in and gram_dual.
double dtn_gap_norm(const LocalDtN& L1, const LocalDtN& L2);

// Fourier H^{-1} distance of q1 - q2 after zero-extension to a 4x padded
// periodic box.  The support-checking entry point enforces the Prop-6.1
// hypothesis q1 = q2 outside the support rectangle.
double h_minus_one_distance(const Potential& q1, const Potential& q2,
                            const GridDomain& dom);
double h_minus_one_of(const GridDomain& dom, const Eigen::VectorXd& diff_full);

struct StabilityRow {
  double t = 0;
  double dtn_gap = 0;
  double h_minus_one = 0;
  bool in_fit = false;  // gap in (0,1) and solvable
  bool skipped = false;
};

struct StabilitySweep {
  std::vector<StabilityRow> rows;
  FitResult fit;  // y = C |log x|^{-sigma}
  double worst_symmetry = 0;
};

StabilitySweep stability_sweep(const GridDomain& dom, const Potential& q1,
                               const Eigen::VectorXd& perturbation_full,
                               const CellRect& support,
                               const std::vector<double>& t_values,
                               int threads = 1);

struct CGOVectors {
  Eigen::Vector3d k, l, m;
  double tau = 0;
  Eigen::Vector3cd rho1, rho2;
};

// rho1 = tau m + i(-k/2 + sqrt(tau^2 - |k|^2/4) l), rho2 its partner; checks
// the orthonormal-frame preconditions and tau >= |k|/2.
CGOVectors cgo_vectors(const Eigen::Vector3d& k, const Eigen::Vector3d& l,
                       const Eigen::Vector3d& m, double tau);

}  // namespace runge
