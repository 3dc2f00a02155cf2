#pragma once

#include <string>
#include <vector>

namespace runge {

// Least-squares fits in transformed coordinates for the three moduli that
// appear in the cost and stability experiments:
//   PowerLaw:   y = C x^{-mu}          (log y vs log x)
//   LogLogLine: log y = C x^{-mu}      (log log y vs log(1/x), needs y > 1)
//   LogModulus: y = C |log x|^{-sigma} (log y vs log|log x|, needs 0 < x < 1)
enum class FitModel { PowerLaw, LogLogLine, LogModulus };

struct FitResult {
  double amplitude = 0;  // C
  double exponent = 0;   // mu / sigma
  double rms = 0;        // root-mean-square residual in transformed coords
  int points = 0;        // points actually used
  bool ok = false;
  std::string note;
};

FitResult fit(const std::vector<double>& x, const std::vector<double>& y,
              FitModel model);

// Slope/intercept/rms of plain least squares on (x, y).
struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
  int points = 0;
};
LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y);

double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace runge
