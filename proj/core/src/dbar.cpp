#include "dbk/dbar.hpp"

#include <algorithm>
#include <sstream>

#include "dbk/cauchy.hpp"
#include "dbk/error.hpp"
#include "dbk/stencil.hpp"

namespace dbk {

Mask residual_mask(const KoszulForm& w) { return w.domain()->depth_mask(std::max(1, w.collar())); }

double dbar_residual(const KoszulForm& u, const KoszulForm& w) {
  return sup_difference(dbar_apply(u), w, residual_mask(w));
}

double tol_closed(const KoszulForm& w) { return 20.0 * w.domain()->h() * w.sup_valid(); }

namespace {

// Cauchy transform along factor k of every slice of a polydisc field (or the
// whole field on a disc).
Field transform_along(const GridDomain& dom, const Field& w, int k) {
  const auto C = cauchy_for(dom.factor(k));
  Field u(dom.size());
  if (dom.dim() == 1) {
    C->apply(w.data(), 1, u.data(), 1);
    return u;
  }
  const std::size_t n0 = dom.factor(0).size();
  const std::size_t n1 = dom.factor(1).size();
  if (k == 0) {
    for (std::size_t k1 = 0; k1 < n1; ++k1) C->apply(w.data() + k1 * n0, 1, u.data() + k1 * n0, 1);
  } else {
    for (std::size_t k0 = 0; k0 < n0; ++k0) C->apply(w.data() + k0, n0, u.data() + k0, n0);
  }
  return u;
}

void finish(DbarSolution& sol, const KoszulForm& w) {
  const Mask where = residual_mask(w);
  const KoszulForm du = dbar_apply(sol.solution);
  sol.residual_per_J.assign(w.truncated() ? 0 : w.num_J(), 0.0);
  sol.residual_sup = 0.0;
  if (!w.truncated()) {
    for (std::size_t j = 0; j < w.num_J(); ++j) {
      const unsigned J = w.J_list()[j];
      double r = 0.0;
      for (unsigned K : w.K_list()) {
        const Field& a = du.coeff(J, K);
        const Field& b = w.coeff(J, K);
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (where[i]) r = std::max(r, std::abs(a[i] - b[i]));
        }
      }
      sol.residual_per_J[j] = r;
      sol.residual_sup = std::max(sol.residual_sup, r);
    }
  }
  sol.input_sup = w.sup_valid();
  sol.bound_constant = sol.input_sup > 0.0 ? sol.solution.sup() / sol.input_sup : 0.0;
}

void require_directional_support(const KoszulForm& w, unsigned K, int factor) {
  const auto& dom = *w.domain();
  const double margin = 2.0 * dom.h();
  const auto& fac = dom.factor(factor);
  for (unsigned J : w.J_list()) {
    const Field& c = w.coeff(J, K);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == cplx(0.0)) continue;
      const auto kk = dom.split(i)[static_cast<std::size_t>(factor)];
      if (fac.bdist[static_cast<std::size_t>(kk)] < margin) {
        std::ostringstream os;
        os << "data reaches within 2h of the boundary of factor " << factor + 1;
        throw HypothesisError("compact-support", os.str());
      }
    }
  }
}

}  // namespace

DbarSolution solve_dbar_1d(DomainPtr domain, const Field& w) {
  if (domain->dim() != 1) throw DomainMismatch("solve_dbar_1d needs a disc");
  KoszulForm wf = KoszulForm::basis(domain, 1, 0u, 1u, w);
  return solve_dbar_form(wf);
}

DbarSolution solve_dbar_compact_2d(const KoszulForm& w) {
  const auto& dom = *w.domain();
  if (dom.dim() != 2) throw DomainMismatch("solve_dbar_compact_2d needs a polydisc");
  if (w.s() < 1 || w.s() > 2) throw HypothesisError("degree", "the product solver takes s in {1, 2}");
  DbarSolution sol;
  sol.solution = KoszulForm(w.domain(), w.m(), w.r(), w.s() - 1);
  if (w.truncated() || sol.solution.truncated()) {
    finish(sol, w);
    return sol;
  }
  if (w.s() == 1) {
    require_directional_support(w, 0b01u, 0);
    const double closed = dbar_apply(w).sup(residual_mask(dbar_apply(w)));
    if (closed > tol_closed(w)) {
      std::ostringstream os;
      os << "input is not dbar-closed: " << closed << " > " << tol_closed(w);
      throw HypothesisError("closedness", os.str());
    }
    for (unsigned J : w.J_list()) {
      const Field u1 = transform_along(dom, w.coeff(J, 0b01u), 0);
      Field v = w.coeff(J, 0b10u);
      add_wirtinger_dbar(dom, u1, 1, -1.0, v);
      // v is only meaningful where the z2 stencil exists.
      const auto& f1 = dom.factor(1);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto k1 = static_cast<std::size_t>(dom.split(i)[1]);
        if (f1.depth[k1] < 1) v[i] = 0.0;
      }
      const Field u2 = transform_along(dom, v, 1);
      Field& u = sol.solution.coeff_ref(J, 0u);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = u1[i] + u2[i];
    }
    require_directional_support(w, 0b10u, 1);
  } else {
    require_directional_support(w, 0b11u, 0);
    for (unsigned J : w.J_list()) {
      sol.solution.coeff_ref(J, 0b10u) = transform_along(dom, w.coeff(J, 0b11u), 0);
    }
  }
  finish(sol, w);
  return sol;
}

DbarSolution solve_dbar_form(const KoszulForm& w) {
  if (w.s() < 1) throw HypothesisError("degree", "dbar u = w needs s >= 1");
  if (w.n() == 2) return solve_dbar_compact_2d(w);
  DbarSolution sol;
  sol.solution = KoszulForm(w.domain(), w.m(), w.r(), w.s() - 1);
  if (!w.truncated() && !sol.solution.truncated()) {
    // Data is integrated over every node cell; fill the stencil collar so the
    // integrand does not drop to zero one layer inside the boundary.
    KoszulForm data = w;
    extend_from_interior(data);
    for (unsigned J : w.J_list()) {
      sol.solution.coeff_ref(J, 0u) = transform_along(*w.domain(), data.coeff(J, 1u), 0);
    }
  }
  finish(sol, w);
  return sol;
}

}  // namespace dbk
