#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace runge {

// Bad geometry / coefficients / experiment description.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver-level failure (singular operator, non-convergence, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned rectangle in real coordinates.
struct Rect {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

// Axis-aligned rectangle in lattice coordinates; node (i,j) belongs to the
// closed rectangle iff i0 <= i <= i1 and j0 <= j <= j1.
struct CellRect {
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
  int width() const { return i1 - i0; }
  int height() const { return j1 - j0; }
  bool containsNode(int i, int j) const {
    return i0 <= i && i <= i1 && j0 <= j && j <= j1;
  }
  bool strictlyContainsNode(int i, int j) const {
    return i0 < i && i < i1 && j0 < j && j < j1;
  }
};

struct Layout {
  Rect d2{0, 1, 0, 1};
  Rect d1{0.375, 0.625, 0.375, 0.625};
  std::optional<Rect> dtilde;  // default: d1 grown by two cells per side
};

enum class BoundarySide { South, East, North, West, Full };

// A set of lattice nodes together with the lattice edges joining them; used
// to evaluate interior L2/H1 quadratic forms on subdomains.
struct Region {
  std::vector<int> nodes;
  std::vector<std::array<int, 2>> edges;
};

// Nested rectangles D1 c Dtilde c D2 discretized on a uniform lattice of
// spacing h = 1/N, plus the boundary loop of D2 and the accessible arc gamma.
class GridDomain {
 public:
  GridDomain(int n, const Layout& layout, BoundarySide side, double fraction);

  int n() const { return n_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nodeCount() const { return (nx_ + 1) * (ny_ + 1); }
  int nodeId(int i, int j) const { return j * (nx_ + 1) + i; }
  std::array<int, 2> nodeIJ(int node) const {
    return {node % (nx_ + 1), node / (nx_ + 1)};
  }
  Eigen::Vector2d nodeXY(int node) const {
    auto [i, j] = nodeIJ(node);
    return {origin_.x() + i * h_, origin_.y() + j * h_};
  }

  const CellRect& d1() const { return d1_; }
  const CellRect& dtilde() const { return dtilde_; }
  CellRect d2() const { return {0, nx_, 0, ny_}; }

  // Boundary loop of D2: node ids, counterclockwise from the lower-left
  // corner.  gamma() lists positions into the loop (contiguous arc).
  const std::vector<int>& boundaryLoop() const { return loop_; }
  const std::vector<int>& interiorNodes() const { return interior_; }
  const std::vector<int>& gamma() const { return gamma_; }
  std::vector<int> gammaNodes() const;
  int loopLength() const { return static_cast<int>(loop_.size()); }
  bool onBoundary(int i, int j) const {
    return i == 0 || i == nx_ || j == 0 || j == ny_;
  }

  Region rectRegion(const CellRect& r) const;        // closed rectangle
  Region complementRegion(const CellRect& r) const;  // D2 minus open rectangle
  Region wholeRegion() const { return rectRegion(d2()); }
  CellRect snapToCells(const Rect& r) const;

 private:
  void buildLoop();
  void buildGamma(BoundarySide side, double fraction);
  void checkMargins() const;

  int n_, nx_, ny_;
  double h_;
  Eigen::Vector2d origin_;
  CellRect d1_, dtilde_;
  std::vector<int> loop_, interior_, gamma_;
};

GridDomain build_grid(int n, const Layout& layout, double gamma_fraction);
GridDomain build_grid(int n, const Layout& layout, BoundarySide side,
                      double fraction = 1.0);

// Flood fill over D2 minus the closed rectangle; true iff connected.
bool complement_connected(const GridDomain& dom, const CellRect& hole);

}  // namespace runge
