#include "runge/grid.hpp"

#include <cmath>
#include <queue>

namespace runge {

namespace {

int snapDown(double v, double lo, double h) {
  return static_cast<int>(std::floor((v - lo) / h + 1e-9));
}

int snapUp(double v, double lo, double h) {
  return static_cast<int>(std::ceil((v - lo) / h - 1e-9));
}

}  // namespace

CellRect GridDomain::snapToCells(const Rect& r) const {
  CellRect c;
  c.i0 = snapDown(r.xmin, origin_.x(), h_);
  c.i1 = snapUp(r.xmax, origin_.x(), h_);
  c.j0 = snapDown(r.ymin, origin_.y(), h_);
  c.j1 = snapUp(r.ymax, origin_.y(), h_);
  return c;
}

GridDomain::GridDomain(int n, const Layout& layout, BoundarySide side,
                       double fraction)
    : n_(n), h_(1.0 / n), origin_(layout.d2.xmin, layout.d2.ymin) {
  if (n < 16) throw ConfigError("grid resolution must be at least 16");
  nx_ = static_cast<int>(std::lround((layout.d2.xmax - layout.d2.xmin) * n));
  ny_ = static_cast<int>(std::lround((layout.d2.ymax - layout.d2.ymin) * n));
  if (nx_ < 8 || ny_ < 8) throw ConfigError("outer rectangle too small");

  d1_ = snapToCells(layout.d1);
  if (layout.dtilde) {
    dtilde_ = snapToCells(*layout.dtilde);
  } else {
    dtilde_ = {d1_.i0 - 2, d1_.i1 + 2, d1_.j0 - 2, d1_.j1 + 2};
  }
  checkMargins();
  buildLoop();
  buildGamma(side, fraction);

  interior_.reserve((nx_ - 1) * (ny_ - 1));
  for (int j = 1; j < ny_; ++j)
    for (int i = 1; i < nx_; ++i) interior_.push_back(nodeId(i, j));
}

void GridDomain::checkMargins() const {
  auto margin = [](const CellRect& in, const CellRect& out) {
    return std::min(std::min(in.i0 - out.i0, out.i1 - in.i1),
                    std::min(in.j0 - out.j0, out.j1 - in.j1));
  };
  if (d1_.width() < 2 || d1_.height() < 2)
    throw ConfigError("D1 narrower than 2 cells after snapping");
  int m1 = margin(d1_, dtilde_);
  if (m1 < 2)
    throw ConfigError("inclusion margin D1 -> Dtilde is " +
                      std::to_string(m1) + " cells, need >= 2");
  int m2 = margin(dtilde_, d2());
  if (m2 < 2)
    throw ConfigError("inclusion margin Dtilde -> D2 is " +
                      std::to_string(m2) + " cells, need >= 2");
}

void GridDomain::buildLoop() {
  loop_.reserve(2 * (nx_ + ny_));
  for (int i = 0; i < nx_; ++i) loop_.push_back(nodeId(i, 0));
  for (int j = 0; j < ny_; ++j) loop_.push_back(nodeId(nx_, j));
  for (int i = nx_; i > 0; --i) loop_.push_back(nodeId(i, ny_));
  for (int j = ny_; j > 0; --j) loop_.push_back(nodeId(0, j));
}

void GridDomain::buildGamma(BoundarySide side, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ConfigError("gamma fraction must lie in (0, 1]");
  const int P = loopLength();
  int start = 0, span = 0;
  switch (side) {
    case BoundarySide::Full:
      start = 0;
      span = std::max(1, static_cast<int>(std::lround(fraction * P)));
      break;
    case BoundarySide::South:
      start = 0;
      span = std::max(2, static_cast<int>(std::lround(fraction * (nx_ + 1))));
      span = std::min(span, nx_ + 1);
      break;
    case BoundarySide::East:
      start = nx_;
      span = std::max(2, static_cast<int>(std::lround(fraction * (ny_ + 1))));
      span = std::min(span, ny_ + 1);
      break;
    case BoundarySide::North:
      start = nx_ + ny_;
      span = std::max(2, static_cast<int>(std::lround(fraction * (nx_ + 1))));
      span = std::min(span, nx_ + 1);
      break;
    case BoundarySide::West:
      start = 2 * nx_ + ny_;
      span = std::max(2, static_cast<int>(std::lround(fraction * (ny_ + 1))));
      span = std::min(span, ny_ + 1);
      break;
  }
  gamma_.reserve(span);
  for (int k = 0; k < span; ++k) gamma_.push_back((start + k) % P);
}

std::vector<int> GridDomain::gammaNodes() const {
  std::vector<int> out;
  out.reserve(gamma_.size());
  for (int p : gamma_) out.push_back(loop_[p]);
  return out;
}

Region GridDomain::rectRegion(const CellRect& r) const {
  Region reg;
  for (int j = r.j0; j <= r.j1; ++j)
    for (int i = r.i0; i <= r.i1; ++i) reg.nodes.push_back(nodeId(i, j));
  for (int j = r.j0; j <= r.j1; ++j)
    for (int i = r.i0; i < r.i1; ++i)
      reg.edges.push_back({nodeId(i, j), nodeId(i + 1, j)});
  for (int j = r.j0; j < r.j1; ++j)
    for (int i = r.i0; i <= r.i1; ++i)
      reg.edges.push_back({nodeId(i, j), nodeId(i, j + 1)});
  return reg;
}

Region GridDomain::complementRegion(const CellRect& r) const {
  auto keep = [&](int i, int j) { return !r.strictlyContainsNode(i, j); };
  Region reg;
  for (int j = 0; j <= ny_; ++j)
    for (int i = 0; i <= nx_; ++i)
      if (keep(i, j)) reg.nodes.push_back(nodeId(i, j));
  for (int j = 0; j <= ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (keep(i, j) && keep(i + 1, j))
        reg.edges.push_back({nodeId(i, j), nodeId(i + 1, j)});
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i <= nx_; ++i)
      if (keep(i, j) && keep(i, j + 1))
        reg.edges.push_back({nodeId(i, j), nodeId(i, j + 1)});
  return reg;
}

bool complement_connected(const GridDomain& dom, const CellRect& hole) {
  const int nx = dom.nx(), ny = dom.ny();
  auto outside = [&](int i, int j) { return !hole.containsNode(i, j); };
  std::vector<char> seen(dom.nodeCount(), 0);
  int total = 0;
  std::array<int, 2> seed{-1, -1};
  for (int j = 0; j <= ny && seed[0] < 0; ++j)
    for (int i = 0; i <= nx; ++i)
      if (outside(i, j)) {
        seed = {i, j};
        break;
      }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) total += outside(i, j);
  if (seed[0] < 0) return total == 0;

  std::queue<std::array<int, 2>> q;
  q.push(seed);
  seen[dom.nodeId(seed[0], seed[1])] = 1;
  int reached = 0;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop();
    ++reached;
    const std::array<std::array<int, 2>, 4> nb{{{i + 1, j}, {i - 1, j},
                                                {i, j + 1}, {i, j - 1}}};
    for (auto [a, b] : nb) {
      if (a < 0 || a > nx || b < 0 || b > ny) continue;
      if (!outside(a, b)) continue;
      int id = dom.nodeId(a, b);
      if (!seen[id]) {
        seen[id] = 1;
        q.push({a, b});
      }
    }
  }
  return reached == total;
}

GridDomain build_grid(int n, const Layout& layout, double gamma_fraction) {
  return GridDomain(n, layout, BoundarySide::Full, gamma_fraction);
}

GridDomain build_grid(int n, const Layout& layout, BoundarySide side,
                      double fraction) {
  return GridDomain(n, layout, side, fraction);
}

}  // namespace runge
