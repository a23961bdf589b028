#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dbk/error.hpp"
#include "dbk/forms.hpp"
#include "dbk/stencil.hpp"

using namespace dbk;

namespace {

DomainPtr disc(double h = 1.0 / 16) { return build_domain(DomainSpec::disc(1.0), h); }
DomainPtr bidisc(double h = 1.0 / 8) { return build_domain(DomainSpec::polydisc(1.0, 1.0), h); }

Field random_field(const GridDomain& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(d.size());
  for (auto& v : f) v = {u(rng), u(rng)};
  return f;
}

// Fills every block of a form with independent random values.
KoszulForm random_form(const DomainPtr& d, int m, int r, int s, std::uint64_t seed) {
  KoszulForm w(d, m, r, s);
  std::uint64_t k = seed;
  for (unsigned J : w.J_list())
    for (unsigned K : w.K_list()) w.coeff_ref(J, K) = random_field(*d, ++k);
  return w;
}

Mask all(const GridDomain& d) { return Mask(d.size(), 1); }

}  // namespace

TEST(Forms, LayoutAndTruncation) {
  auto d = bidisc();
  KoszulForm w(d, 3, 2, 1);
  EXPECT_EQ(w.num_J(), 3u);
  EXPECT_EQ(w.num_K(), 2u);
  EXPECT_FALSE(w.truncated());
  KoszulForm z(d, 3, 4, 0);
  EXPECT_TRUE(z.truncated());
  EXPECT_EQ(z.sup(), 0.0);
  KoszulForm top(d, 2, 1, 3);
  EXPECT_TRUE(top.truncated());
}

TEST(Forms, WedgeOfBasisElements) {
  auto d = bidisc();
  Field one(d->size(), 1.0);
  const auto a = KoszulForm::basis(d, 2, 0b01, 0b01, one);
  const auto b = KoszulForm::basis(d, 2, 0b10, 0b10, one);
  const auto ab = wedge(a, b);
  EXPECT_EQ(ab.r(), 2);
  EXPECT_EQ(ab.s(), 2);
  EXPECT_EQ(ab.at(0b11, 0b11, 5), cplx(1.0));
  // e2 dzbar1 ^ e1 dzbar2: one transposition in J only.
  const auto c = KoszulForm::basis(d, 2, 0b10, 0b01, one);
  const auto e = KoszulForm::basis(d, 2, 0b01, 0b10, one);
  EXPECT_EQ(wedge(c, e).at(0b11, 0b11, 5), cplx(-1.0));
  // A repeated index kills the product.
  EXPECT_EQ(wedge(a, a).sup(), 0.0);
}

TEST(Forms, WedgeGradedCommutativity) {
  auto d = bidisc();
  for (int r1 = 0; r1 <= 2; ++r1)
    for (int s1 = 0; s1 <= 1; ++s1)
      for (int r2 = 0; r2 + r1 <= 3; ++r2)
        for (int s2 = 0; s2 + s1 <= 2; ++s2) {
          const auto a = random_form(d, 3, r1, s1, 10 * r1 + s1);
          const auto b = random_form(d, 3, r2, s2, 100 + 10 * r2 + s2);
          const double sign = ((r1 * r2 + s1 * s2) % 2) ? -1.0 : 1.0;
          auto ba = wedge(b, a);
          ba *= sign;
          EXPECT_LE(sup_difference(wedge(a, b), ba, all(*d)), 1e-15) << r1 << s1 << r2 << s2;
        }
}

TEST(Forms, ContractionOfLowDegreeForms) {
  auto d = disc();
  auto f = make_map("z,1-z", d);
  const Field w0 = random_field(*d, 7);
  const auto x = KoszulForm::basis(d, 2, 0b01, 0, w0);
  const auto t = koszul_contract(f, x);
  EXPECT_EQ(t.r(), 0);
  for (std::size_t k = 0; k < d->size(); ++k) EXPECT_EQ(t.at(0, 0, k), f.samples(0)[k] * w0[k]);

  // T_f(e1 ^ e2) = f1 e2 - f2 e1.
  const auto top = KoszulForm::basis(d, 2, 0b11, 0, Field(d->size(), 1.0));
  const auto t2 = koszul_contract(f, top);
  for (std::size_t k = 0; k < d->size(); k += 11) {
    EXPECT_EQ(t2.at(0b10, 0, k), f.samples(0)[k]);
    EXPECT_EQ(t2.at(0b01, 0, k), -f.samples(1)[k]);
  }
}

TEST(Forms, ContractionSquaresToZero) {
  auto d = disc();
  auto f = make_map("z,z^2,1-z", d);
  const auto w = random_form(d, 3, 3, 1, 3);
  const auto tt = koszul_contract(f, koszul_contract(f, w));
  EXPECT_LE(tt.sup(), 1e-14);
  const auto tr = koszul_contract(f, koszul_contract(f, w, ContractSign::reversed), ContractSign::reversed);
  EXPECT_LE(tr.sup(), 1e-14);
}

TEST(Forms, DbarOfPolynomialsIsExact) {
  auto d = disc(1.0 / 32);
  auto field = [&](auto fn) {
    Field out(d->size());
    for (std::size_t k = 0; k < d->size(); ++k) out[k] = fn(d->point(k)[0]);
    return out;
  };
  const auto zb = dbar_apply(KoszulForm::scalar(d, 1, field([](cplx z) { return std::conj(z); })));
  const auto zz = dbar_apply(KoszulForm::scalar(d, 1, field([](cplx z) { return z; })));
  const auto r2 = dbar_apply(KoszulForm::scalar(d, 1, field([](cplx z) { return cplx(std::norm(z)); })));
  EXPECT_EQ(zb.collar(), 1);
  const Mask inner = d->depth_mask(1);
  for (std::size_t k = 0; k < d->size(); ++k) {
    if (!inner[k]) {
      EXPECT_EQ(zb.at(0, 1, k), cplx(0.0));
      continue;
    }
    EXPECT_NEAR(std::abs(zb.at(0, 1, k) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(zz.at(0, 1, k)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r2.at(0, 1, k) - d->point(k)[0]), 0.0, 1e-12);
  }
}

TEST(Forms, DbarOnBidiscMatchesStencil) {
  auto d = bidisc();
  const Field u = random_field(*d, 11);
  const auto du = dbar_apply(KoszulForm::scalar(d, 1, u));
  const Field d1 = wirtinger_dbar(*d, u, 0);
  const Field d2 = wirtinger_dbar(*d, u, 1);
  const Mask inner = d->depth_mask(1);
  for (std::size_t k = 0; k < d->size(); ++k) {
    if (!inner[k]) continue;
    EXPECT_EQ(du.at(0, 0b01, k), d1[k]);
    EXPECT_EQ(du.at(0, 0b10, k), d2[k]);
  }
  const auto ddu = dbar_apply(du);
  EXPECT_LE(ddu.sup(d->depth_mask(2)), 1e-12);
}

TEST(Forms, HolomorphicMapsPassTheirCertificate) {
  auto d = disc(1.0 / 32);
  for (const char* name : {"z", "z^2", "z,1-z", "z-2"}) {
    const auto f = make_map(name, d);
    EXPECT_LE(f.holomorphy_defect(), f.tol_holo()) << name;
  }
  const auto c = make_map("const:2", d);
  EXPECT_EQ(c.samples(0)[3], cplx(2.0));
  EXPECT_THROW(make_map("sin", d), HypothesisError);
  EXPECT_THROW(make_map("z1,z2", d), HypothesisError);
}

TEST(Forms, JacobianRankMask) {
  auto d = disc(1.0 / 32);
  const auto f = make_map("z^2", d);
  const Mask m = jacobian_rank_mask(f, *d, 0.5);
  for (std::size_t k = 0; k < d->size(); ++k) {
    EXPECT_EQ(m[k] != 0, 2.0 * std::abs(d->point(k)[0]) < 0.5);
  }
  const auto id = make_map("z", d);
  const Mask none = jacobian_rank_mask(id, *d, 0.5);
  for (auto v : none) EXPECT_EQ(v, 0);
}

TEST(Forms, DifferenceLocation) {
  auto d = disc();
  const auto a = random_form(d, 2, 1, 1, 21);
  auto b = a;
  b.coeff_ref(0b10, 0b1)[17] += cplx(0.0, 0.75);
  const auto loc = locate_difference(a, b, all(*d));
  EXPECT_EQ(loc.node, 17u);
  EXPECT_EQ(loc.J, 0b10u);
  EXPECT_EQ(loc.K, 0b1u);
  EXPECT_NEAR(loc.value, 0.75, 1e-15);
  EXPECT_NEAR(sup_difference(a, b, all(*d)), 0.75, 1e-15);
  EXPECT_THROW(sup_difference(a, KoszulForm(d, 2, 0, 1), all(*d)), DomainMismatch);
}

TEST(Forms, ExtendFromInteriorFillsTheCollar) {
  auto d = disc();
  KoszulForm w = KoszulForm::scalar(d, 1, Field(d->size(), 0.0));
  const Mask inner = d->depth_mask(2);
  for (std::size_t k = 0; k < d->size(); ++k) w.coeff_ref(0, 0)[k] = inner[k] ? 3.0 : 0.0;
  w.set_collar(2);
  extend_from_interior(w);
  EXPECT_EQ(w.collar(), 0);
  for (std::size_t k = 0; k < d->size(); ++k) EXPECT_EQ(w.at(0, 0, k), cplx(3.0));
}
