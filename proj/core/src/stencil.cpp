#include "dbk/stencil.hpp"

namespace dbk {

namespace {

template <typename Op>
void for_each_stencil(const GridDomain& domain, int k, Op&& op) {
  const double inv = 1.0 / (4.0 * domain.h());
  const auto& fac = domain.factor(k);
  const std::size_t n0 = domain.factor(0).size();
  const std::size_t nk = fac.size();
  const std::size_t outer = domain.size() / nk;
  if (k == 0) {
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * n0;
      for (std::size_t a = 0; a < nk; ++a) {
        const auto& nb = fac.nbr[a];
        if (nb[0] < 0 || nb[1] < 0 || nb[2] < 0 || nb[3] < 0) continue;
        op(base + a, base + static_cast<std::size_t>(nb[0]), base + static_cast<std::size_t>(nb[1]),
           base + static_cast<std::size_t>(nb[2]), base + static_cast<std::size_t>(nb[3]), inv);
      }
    }
    return;
  }
  // Along the second factor the stride is n0; sweeping the first factor
  // innermost keeps every access contiguous.
  for (std::size_t a = 0; a < nk; ++a) {
    const auto& nb = fac.nbr[a];
    if (nb[0] < 0 || nb[1] < 0 || nb[2] < 0 || nb[3] < 0) continue;
    const std::size_t i0 = a * n0;
    const std::size_t px = static_cast<std::size_t>(nb[0]) * n0;
    const std::size_t mx = static_cast<std::size_t>(nb[1]) * n0;
    const std::size_t py = static_cast<std::size_t>(nb[2]) * n0;
    const std::size_t my = static_cast<std::size_t>(nb[3]) * n0;
    for (std::size_t o = 0; o < outer; ++o) op(i0 + o, px + o, mx + o, py + o, my + o, inv);
  }
}

}  // namespace

void add_wirtinger_dbar(const GridDomain& domain, const Field& u, int k, cplx scale, Field& out) {
  const cplx I(0.0, 1.0);
  for_each_stencil(domain, k, [&](std::size_t i, std::size_t px, std::size_t mx, std::size_t py,
                                  std::size_t my, double inv) {
    out[i] += scale * (inv * ((u[px] - u[mx]) + I * (u[py] - u[my])));
  });
}

Field wirtinger_dbar(const GridDomain& domain, const Field& u, int k) {
  Field out(domain.size(), cplx(0.0));
  add_wirtinger_dbar(domain, u, k, 1.0, out);
  return out;
}

Field wirtinger_d(const GridDomain& domain, const Field& u, int k) {
  Field out(domain.size(), cplx(0.0));
  const cplx I(0.0, 1.0);
  for_each_stencil(domain, k, [&](std::size_t i, std::size_t px, std::size_t mx, std::size_t py,
                                  std::size_t my, double inv) {
    out[i] = inv * ((u[px] - u[mx]) - I * (u[py] - u[my]));
  });
  return out;
}

}  // namespace dbk
