#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "runge/grid.hpp"

namespace runge {

// Data of L = div(a grad .) + c with ellipticity/size bound K.
struct Coefficients {
  Eigen::VectorXd a;  // per lattice node, face values averaged on assembly
  Eigen::VectorXd c;  // per lattice node
  double bound = 1.0;

  static Coefficients constant(const GridDomain& dom, double aval, double cval,
                               double K);
  static Coefficients checkerboard(const GridDomain& dom, double lo, double hi,
                                   double K);
  static Coefficients bump(const GridDomain& dom, const CellRect& support,
                           double height, double K);
  void validate() const;
};

// Assembled operator on the full lattice together with the factorized
// interior Dirichlet block.  The form matrix realizes
//   (v, K u) = sum_edges a_e (u_p - u_q)(v_p - v_q) - h^2 sum_nodes c u v,
// so the discrete equation Lu = F reads (K u)_i = -h^2 F_i at interior nodes.
class EllipticOperator {
 public:
  EllipticOperator(const GridDomain& dom, Coefficients coeff);

  const GridDomain& domain() const { return *dom_; }
  const Coefficients& coefficients() const { return coeff_; }
  const Eigen::SparseMatrix<double>& formMatrix() const { return form_; }

  // Smallest-magnitude eigenvalue of the interior block divided by h^2
  // (so a == 1, c == 0 gives roughly the first Dirichlet eigenvalue 2*pi^2).
  double certificate() const { return certificate_; }

  // Full-lattice solution with boundary values taken from loop_trace
  // (indexed by loop position) and source F (full lattice).
  Eigen::VectorXd solve(const Eigen::VectorXd& source,
                        const Eigen::VectorXd& loop_trace) const;

 private:
  void factorize();
  void certify();

  const GridDomain* dom_;
  Coefficients coeff_;
  Eigen::SparseMatrix<double> form_;
  Eigen::SparseMatrix<double> interiorBlock_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> interior_;
  std::vector<int> interiorPos_;  // lattice node -> interior index, -1 if none
  double certificate_ = 0;
};

struct DirichletSolve {
  Eigen::VectorXd u;         // full lattice
  Eigen::VectorXd source;    // full lattice
  Eigen::VectorXd boundary;  // loop trace (by loop position)
  double residual_norm = 0;  // interior equation residual, scaled
};

DirichletSolve solve_dirichlet(const EllipticOperator& op,
                               const Eigen::VectorXd& source,
                               const Eigen::VectorXd& loop_trace);

// w with L w = h * indicator(D1), w = 0 on the loop; h_on_d1 is indexed by
// the nodes of dom.rectRegion(dom.d1()).
DirichletSolve dual_source_solve(const EllipticOperator& op,
                                 const Eigen::VectorXd& h_on_d1);

enum class CurveSide { Inside, Outside };

// Weak conormal pairings (already arclength-integrated: value at node b is
// the form applied to the nodal hat trace) along the boundary loop of `rect`,
// ordered counterclockwise from the lower-left corner of the rectangle.
// The sign convention refers to the outward normal of `rect` on both sides.
Eigen::VectorXd conormal_pairing(const EllipticOperator& op,
                                 const DirichletSolve& s, const CellRect& rect,
                                 CurveSide side);
// Same along the outer boundary of D2 (indexed by loop position).
Eigen::VectorXd conormal_pairing(const EllipticOperator& op,
                                 const DirichletSolve& s);
// Pointwise flux density: pairing / h.
Eigen::VectorXd conormal_density(const EllipticOperator& op,
                                 const DirichletSolve& s, const CellRect& rect,
                                 CurveSide side);

// Node ids along the boundary loop of a lattice rectangle, counterclockwise
// from its lower-left corner.
std::vector<int> rect_loop(const GridDomain& dom, const CellRect& rect);

// |(Lu, w) - (u, Lw) - <dnu u, w> + <u, dnu w>| over D2; a discrete identity.
double green_residual(const EllipticOperator& op, const DirichletSolve& u,
                      const DirichletSolve& w);

// Dirichlet solve of the same operator restricted to a sub-rectangle;
// boundary values are read from `boundary_full` on the rectangle's loop
// nodes.  Returns a full-lattice field vanishing outside the rectangle.
Eigen::VectorXd solve_on_rect(const GridDomain& dom, const Coefficients& coeff,
                              const CellRect& rect,
                              const Eigen::VectorXd& boundary_full);

}  // namespace runge
