#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace runge {

// Seeded generator with a fixed uniform mapping so that reports are
// bit-identical across platforms (std::uniform_real_distribution is not
// specified exactly).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  Eigen::VectorXd vector(int n, double a, double b) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
    return v;
  }

  // Deterministic Box-Muller; consumes exactly two uniforms per pair.
  double normal() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  bool have_ = false;
  double spare_ = 0;
};

}  // namespace runge
