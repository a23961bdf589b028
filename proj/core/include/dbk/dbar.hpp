#pragma once

#include "dbk/forms.hpp"

namespace dbk {

/// A solution u of dbar u = w together with its certificate.
struct DbarSolution {
  KoszulForm solution;
  /// sup |dbar_apply(u) - w| over residual_mask().
  double residual_sup = 0.0;
  double input_sup = 0.0;
  /// sup|u| / sup|w| (0 for zero input).
  double bound_constant = 0.0;
  /// Largest per-J residual, in J_list order of the input.
  std::vector<double> residual_per_J;
};

/// Nodes on which a solution of dbar u = w is certified: depth >= 1 and
/// depth >= the collar of w.
Mask residual_mask(const KoszulForm& w);

/// sup |dbar_apply(u) - w| over residual_mask(w).
double dbar_residual(const KoszulForm& u, const KoszulForm& w);

/// 20 h sup|w|.
double tol_closed(const KoszulForm& w);

/// Cauchy transform solution of du/dzbar = w on a disc; w is a scalar field.
DbarSolution solve_dbar_1d(DomainPtr domain, const Field& w);

/// Product solver on a polydisc for forms of degree (r, s), s in {1, 2}.
///
/// s = 1: u = C1[w1] + C2[w2 - D2 C1[w1]], with C_k the Cauchy transform
/// in z_k taken slice by slice and D_k the discrete dzbar_k. Requires the
/// dzbar_k coefficient to vanish within 2h of the boundary of the k-th
/// factor, and w to be discretely closed within tol_closed.
///
/// s = 2: u = C1[w12] dzbar_2, requiring w12 to vanish within 2h of the
/// boundary of the first factor.
DbarSolution solve_dbar_compact_2d(const KoszulForm& w);

/// Solves dbar u = w componentwise in J: the Cauchy transform on a disc,
/// the product solver on a polydisc.
DbarSolution solve_dbar_form(const KoszulForm& w);

}  // namespace dbk
