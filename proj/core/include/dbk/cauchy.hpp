#pragma once

#include <memory>
#include <vector>

#include "dbk/grid.hpp"

namespace dbk {

/// Exact integral of 1/(x + iy) over the unit square centred at (a, b).
cplx unit_cell_integral(double a, double b);

/// Discrete Cauchy transform on one factor disc,
///   u(z) = -(1/pi) sum_cells w(zeta) int_cell dA(zeta') / (zeta' - z),
/// where every inside node owns its full h x h cell and the cell integral is
/// taken in closed form (the cell containing z included). Evaluated at all
/// inside nodes at once by FFT correlation.
class CauchyTransform {
public:
  explicit CauchyTransform(const DiscFactor& factor);
  ~CauchyTransform();
  CauchyTransform(const CauchyTransform&) = delete;
  CauchyTransform& operator=(const CauchyTransform&) = delete;

  /// Reads factor.size() values from w (with stride) and writes the
  /// transform into u (with stride).
  void apply(const cplx* w, std::size_t w_stride, cplx* u, std::size_t u_stride) const;
  Field apply(const Field& w) const;

  int padded_size() const { return pad_; }
  const DiscFactor& factor() const { return factor_; }

private:
  struct Plans;
  DiscFactor factor_;
  int pad_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Shared transform for a factor of the given radius and spacing. The
/// returned object owns scratch buffers and must not be used from two
/// threads at once.
std::shared_ptr<const CauchyTransform> cauchy_for(const DiscFactor& factor);

/// Direct evaluation of the same transform at an arbitrary point, summing
/// over the nodes listed in `sources` (all nodes when empty). Cells within
/// four spacings use the exact cell integral; farther cells use the midpoint
/// value with its leading correction.
cplx cauchy_at(const DiscFactor& factor, const Field& w, cplx z,
               const std::vector<std::size_t>& sources = {});

/// Smallest integer >= n whose only prime factors are 2, 3 and 5.
int fft_friendly_size(int n);

}  // namespace dbk
