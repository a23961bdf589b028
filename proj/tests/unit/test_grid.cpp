#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dbk/error.hpp"
#include "dbk/grid.hpp"
#include "dbk/profile.hpp"

using namespace dbk;

TEST(Grid, DiscAreaAndSecondMoment) {
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    auto d = build_domain(DomainSpec::disc(1.0), h);
    Field one(d->size(), 1.0), r2(d->size());
    for (std::size_t k = 0; k < d->size(); ++k) r2[k] = std::norm(d->point(k)[0]);
    EXPECT_NEAR(integrate(*d, one).real(), std::numbers::pi, 0.5 * h);
    EXPECT_NEAR(integrate(*d, r2).real(), std::numbers::pi / 2, 0.5 * h);
  }
}

TEST(Grid, BidiscVolumeIsProductOfAreas) {
  auto d = build_domain(DomainSpec::polydisc(1.0, 0.5), 1.0 / 16);
  auto a = build_domain(DomainSpec::disc(1.0), 1.0 / 16);
  auto b = build_domain(DomainSpec::disc(0.5), 1.0 / 16);
  Field one(d->size(), 1.0), oa(a->size(), 1.0), ob(b->size(), 1.0);
  EXPECT_EQ(d->size(), a->size() * b->size());
  EXPECT_NEAR(integrate(*d, one).real(), integrate(*a, oa).real() * integrate(*b, ob).real(), 1e-10);
}

TEST(Grid, RejectsBadSpacing) {
  EXPECT_THROW(build_domain(DomainSpec::disc(1.0), 0.0), HypothesisError);
  EXPECT_THROW(build_domain(DomainSpec::disc(1.0), -0.1), HypothesisError);
  EXPECT_THROW(build_domain(DomainSpec::disc(1.0), 0.5), HypothesisError);
}

TEST(Grid, NodesInsideWithAnalyticBoundaryDistance) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 32);
  for (std::size_t k = 0; k < d->size(); ++k) {
    const cplx z = d->point(k)[0];
    ASSERT_LT(std::abs(z), 1.0);
    EXPECT_NEAR(d->boundary_dist(k), 1.0 - std::abs(z), 1e-12);
  }
  CPoint outside;
  outside[0] = {1.5, 0.0};
  EXPECT_FALSE(d->contains(outside));
}

TEST(Grid, NeighboursAndDepth) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 16);
  const double h = d->h();
  for (std::size_t k = 0; k < d->size(); ++k) {
    const long e = d->neighbor(k, 0, +1);
    if (e >= 0) EXPECT_NEAR(std::abs(d->point(static_cast<std::size_t>(e))[0] - d->point(k)[0] - h), 0.0, 1e-12);
    const long n = d->neighbor(k, 1, +1);
    if (n >= 0) {
      EXPECT_NEAR(std::abs(d->point(static_cast<std::size_t>(n))[0] - d->point(k)[0] - cplx(0, h)), 0.0, 1e-12);
    }
    // A node with every axis neighbour present has positive depth.
    bool full = true;
    for (int axis = 0; axis < 2; ++axis)
      for (int dir : {-1, 1}) full = full && d->neighbor(k, axis, dir) >= 0;
    EXPECT_EQ(full, d->depth(k) >= 1);
  }
  const Mask deep = d->depth_mask(3);
  for (std::size_t k = 0; k < d->size(); ++k) EXPECT_EQ(deep[k] != 0, d->depth(k) >= 3);
}

TEST(Grid, DistanceToPointsMatchesBruteForce) {
  auto d = build_domain(DomainSpec::polydisc(1.0, 1.0), 1.0 / 8);
  std::vector<CPoint> pts(3);
  pts[0][0] = {0.1, 0.2};
  pts[1][1] = {-0.3, 0.0};
  pts[2][0] = {0.0, -0.5};
  pts[2][1] = {0.2, 0.2};
  const RealField dist = distance_to_points(*d, pts);
  for (std::size_t k = 0; k < d->size(); k += 7) {
    double best = 1e300;
    for (const auto& p : pts) best = std::min(best, distance(d->point(k), p));
    EXPECT_NEAR(dist[k], best, 1e-12);
  }
}

TEST(Grid, BumpIsOneInsideAndZeroOutside) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 32);
  CPoint c;
  c[0] = {0.1, -0.1};
  const CutOff chi = bump(*d, std::vector<CPoint>{c}, 0.2, 0.5);
  for (std::size_t k = 0; k < d->size(); ++k) {
    const double r = std::abs(d->point(k)[0] - c[0]);
    if (r <= 0.2) EXPECT_EQ(chi.values[k], 1.0);
    if (r >= 0.5) EXPECT_EQ(chi.values[k], 0.0);
    EXPECT_GE(chi.values[k], 0.0);
    EXPECT_LE(chi.values[k], 1.0);
  }
  EXPECT_GT(chi.gradient_sup, 0.0);
  CPoint edge;
  edge[0] = {0.8, 0.0};
  EXPECT_THROW(bump(*d, std::vector<CPoint>{edge}, 0.1, 0.4), HypothesisError);
}

TEST(Profile, SmoothStepEndsAndDerivative) {
  EXPECT_EQ(smooth_step(-0.5), 1.0);
  EXPECT_EQ(smooth_step(0.0), 1.0);
  EXPECT_EQ(smooth_step(1.0), 0.0);
  EXPECT_EQ(smooth_step(1.5), 0.0);
  for (double t = 0.05; t < 1.0; t += 0.05) {
    const double fd = (smooth_step(t + 1e-6) - smooth_step(t - 1e-6)) / 2e-6;
    EXPECT_NEAR(smooth_step_derivative(t), fd, 1e-6);
    EXPECT_LE(std::abs(smooth_step_derivative(t)), smooth_step_gradient_constant() + 1e-9);
  }
  EXPECT_EQ(radial_cutoff(0.1, 0.2, 0.9), 1.0);
  EXPECT_EQ(radial_cutoff(0.95, 0.2, 0.9), 0.0);
}
