#include "runge/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace runge {

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.points = static_cast<int>(x.size());
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("line_fit needs >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = std::accumulate(x.begin(), x.end(), 0.0);
  double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("line_fit: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

FitResult fit(const std::vector<double>& x, const std::vector<double>& y,
              FitModel model) {
  FitResult out;
  std::vector<double> tx, ty;
  for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    switch (model) {
      case FitModel::PowerLaw:
        if (x[i] <= 0 || y[i] <= 0) continue;
        tx.push_back(std::log(x[i]));
        ty.push_back(std::log(y[i]));
        break;
      case FitModel::LogLogLine:
        if (x[i] <= 0 || y[i] <= 1.0) continue;
        tx.push_back(std::log(1.0 / x[i]));
        ty.push_back(std::log(std::log(y[i])));
        break;
      case FitModel::LogModulus:
        if (x[i] <= 0 || x[i] >= 1 || y[i] <= 0) continue;
        tx.push_back(std::log(-std::log(x[i])));
        ty.push_back(std::log(y[i]));
        break;
    }
  }
  out.points = static_cast<int>(tx.size());
  if (out.points < 4) {
    out.note = "insufficient data";
    return out;
  }
  LineFit lf = line_fit(tx, ty);
  out.amplitude = std::exp(lf.intercept);
  out.exponent = (model == FitModel::LogLogLine) ? lf.slope : -lf.slope;
  out.rms = lf.rms;
  out.ok = true;
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson needs >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double cxy = 0, cxx = 0, cyy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  if (cxx == 0 || cyy == 0) return 0;
  return cxy / std::sqrt(cxx * cyy);
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double mean = 0.5 * (i + j) + 1.0;  // average rank for ties
    for (size_t k = i; k <= j; ++k) r[order[k]] = mean;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

}  // namespace runge
