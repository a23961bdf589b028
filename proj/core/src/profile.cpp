#include "dbk/profile.hpp"

#include <algorithm>
#include <cmath>

namespace dbk {

double smooth_step(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = 1.0 / (1.0 - t * t);
  const double b = 1.0 / (t * t);
  // e^{-a} / (e^{-a} + e^{-b}) = 1 / (1 + e^{a-b})
  const double e = a - b;
  if (e > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double t2 = t * t;
  const double a = 1.0 / (1.0 - t2);
  const double b = 1.0 / t2;
  const double e = a - b;
  if (std::abs(e) > 700.0) return 0.0;
  // d/dt (a - b) = 2t/(1-t^2)^2 + 2/t^3
  const double de = 2.0 * t * a * a + 2.0 / (t2 * t);
  const double ex = std::exp(e);
  const double s = 1.0 / (1.0 + ex);
  return -s * s * ex * de;
}

double smooth_step_gradient_constant() {
  static const double c = [] {
    double best = 0.0;
    constexpr int n = 20000;
    for (int i = 1; i < n; ++i) {
      best = std::max(best, std::abs(smooth_step_derivative(static_cast<double>(i) / n)));
    }
    return best * 1.001;
  }();
  return c;
}

}  // namespace dbk
