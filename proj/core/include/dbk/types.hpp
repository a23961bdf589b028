#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace dbk {

using cplx = std::complex<double>;

/// Complex-valued samples, one per grid node.
using Field = std::vector<cplx>;
/// Real-valued samples, one per grid node.
using RealField = std::vector<double>;
/// Boolean per grid node.
using Mask = std::vector<std::uint8_t>;

/// A point of C^n for n <= 2; unused coordinates are zero.
struct CPoint {
  std::array<cplx, 2> z{};

  cplx& operator[](int k) { return z[static_cast<std::size_t>(k)]; }
  const cplx& operator[](int k) const { return z[static_cast<std::size_t>(k)]; }
};

/// Euclidean distance in C^2 (unused coordinates contribute nothing).
inline double distance(const CPoint& a, const CPoint& b) {
  return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

/// A scalar function on C^n given in closed form.
using Evaluator = std::function<cplx(const CPoint&)>;

double sup_norm(const Field& f);
double sup_norm(const Field& f, const Mask& where);

}  // namespace dbk
