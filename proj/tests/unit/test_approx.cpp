#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dbk/approx.hpp"
#include "dbk/error.hpp"

using namespace dbk;

TEST(Approx, PartitionBump) {
  const double rho = 0.2;
  EXPECT_EQ(partition_bump(0.0, rho), 1.0);
  EXPECT_EQ(partition_bump(0.5 * rho, rho), 1.0);
  EXPECT_EQ(partition_bump(rho, rho), 0.0);
  EXPECT_EQ(partition_bump(2 * rho, rho), 0.0);
  double prev = 1.0;
  for (double t = 0.5 * rho; t <= rho; t += 0.01 * rho) {
    const double v = partition_bump(t, rho);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(Approx, ImageCloudQueryMatchesBruteForce) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 32);
  const auto f = make_map("z,z^2,1-z", d);
  const ImageCloud cloud(f);
  ASSERT_EQ(cloud.size(), d->size());
  ASSERT_EQ(cloud.m(), 3);
  for (const auto& lambda : {std::vector<cplx>{0.1, 0.0, 0.9}, std::vector<cplx>{{0.5, 0.5}, {0.0, 0.5}, {0.5, -0.5}}}) {
    for (double radius : {0.05, 0.3}) {
      std::vector<std::size_t> brute;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        double s = 0;
        for (int j = 0; j < 3; ++j) s += std::norm(cloud.point(i)[j] - lambda[static_cast<std::size_t>(j)]);
        EXPECT_NEAR(cloud.distance(i, lambda), std::sqrt(s), 1e-14);
        if (std::sqrt(s) < radius) brute.push_back(i);
      }
      EXPECT_EQ(cloud.query(lambda, radius), brute);
    }
  }
}

TEST(Approx, SmoothedDataStaysClose) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 32);
  const auto f = make_map("z", d);
  const SmoothingContext ctx(f, [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); }, 0.3);
  const auto data = smooth_vanishing_data(ctx, {cplx(0.2, -0.1)});
  EXPECT_LT(data.sup_error, 0.3);
  ASSERT_FALSE(data.clusters.empty());
  EXPECT_LE(data.dbar_on_fiber_zone, 1e-14);
  EXPECT_LE(data.dbar_on_collar_zone, 1e-14);
  EXPECT_GT(data.fiber_gap, 0.0);

  const auto solve = per_lambda_solve(ctx, data);
  EXPECT_TRUE(solve.holomorphic);
  EXPECT_LE(solve.dbar_G, solve.tolerance);
  EXPECT_TRUE(solve.division_ok);
  EXPECT_LE(solve.division_ratio, 1.0);
}

TEST(Approx, SmallPipelineIsCertified) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 16);
  const auto f = make_map("z", d);
  const auto a = approximate(f, [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); }, 0.5);
  EXPECT_TRUE(a.net.covered);
  EXPECT_GT(a.net.partition_floor, 0.0);
  EXPECT_LE(a.assembly.sup_error, 2 * 0.5);
  EXPECT_EQ(a.assembly.chain_violations, 0u);
  EXPECT_TRUE(a.certified);
  for (const auto& r : a.net.records) {
    EXPECT_TRUE(r.division_ok);
    EXPECT_LE(r.dbar_G, r.tolerance);
  }

  std::ostringstream one, two;
  write_lambda_csv(one, a.net);
  const auto b = approximate(f, [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); }, 0.5);
  write_lambda_csv(two, b.net);
  EXPECT_EQ(one.str(), two.str());
}

TEST(Approx, HypothesesAreChecked) {
  auto d = build_domain(DomainSpec::disc(1.0), 1.0 / 16);
  const auto f = make_map("z", d);
  try {
    approximate(f, [](const CPoint&) { return cplx(1.0); }, 0.2);
    FAIL() << "g = 1 does not vanish on the boundary";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.certificate(), "boundary-vanishing");
  }
  EXPECT_THROW(approximate(f, [](const CPoint& p) { return cplx(1.0 - std::norm(p[0])); }, 0.0), HypothesisError);

  auto bi = build_domain(DomainSpec::polydisc(1.0, 1.0), 1.0 / 8);
  EXPECT_THROW(approximate(make_map("z1,z2", bi), [](const CPoint&) { return cplx(0.0); }, 0.2), DomainMismatch);
}
