#pragma once

namespace dbk {

/// C-infinity step built from the mollifier exp(-1/(1-t^2)):
///   step(t) = e^{-1/(1-t^2)} / (e^{-1/(1-t^2)} + e^{-1/t^2}),
/// equal to 1 for t <= 0, 0 for t >= 1, with all derivatives vanishing at
/// both ends.
double smooth_step(double t);

/// d/dt smooth_step(t).
double smooth_step_derivative(double t);

/// sup_t |smooth_step'(t)|, evaluated once on a fine sample.
double smooth_step_gradient_constant();

/// Radial cut-off: 1 for d <= r_inner, 0 for d >= r_outer.
inline double radial_cutoff(double d, double r_inner, double r_outer) {
  if (d <= r_inner) return 1.0;
  if (d >= r_outer) return 0.0;
  return smooth_step((d - r_inner) / (r_outer - r_inner));
}

}  // namespace dbk
