#include "gen.hpp"

#include <mw/extrapolation.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace mw;
using namespace mwtest;

namespace {

ConvexField random_full_field(const DyadicGrid& g, int n, CounterRng& rng) {
  std::vector<ConvexBody> cells;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) cells.push_back(random_polytope(n, n + 2, rng));
  return ConvexField(g, n, cells);
}

}  // namespace

TEST(InterpolateNorm, Endpoints) {
  CounterRng rng(121);
  for (int n = 2; n <= 3; ++n) {
    DyadicGrid g(1, 2);
    ConvexField f0 = random_full_field(g, n, rng);
    ConvexField f1 = random_full_field(g, n, rng);
    NormFunction one = interpolate_norm(f0, f1, 1.0);
    NormFunction inf = interpolate_norm(f0, f1, kInf);
    const Mat& grid = direction_grid(n);
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
      for (int j = 0; j < grid.cols(); ++j) {
        const Vec d = grid.col(j);
        EXPECT_NEAR(one.rho(c, d), f1.at(c).support(d), 1e-10 * f1.at(c).support(d));
        EXPECT_NEAR(inf.rho(c, d), f0.at(c).gauge(d), 1e-10 * f0.at(c).gauge(d));
      }
  }
}

TEST(InterpolateNorm, UnitBallsGiveEuclidean) {
  CounterRng rng(122);
  DyadicGrid g(1, 2);
  ConvexField b = ConvexField::constant(g, ConvexBody::unit_ball(2));
  for (double p : {1.5, 2.0, 4.0}) {
    NormFunction rho = interpolate_norm(b, b, p);
    for (int r = 0; r < 50; ++r) {
      Vec u = gaussian(2, rng);
      EXPECT_GE(rho.rho(1, u), u.norm() * (1 - 1e-9));
      EXPECT_LE(rho.rho(1, u), u.norm() * 1.002);
    }
  }
}

TEST(InterpolateNorm, BelowGeometricMeanAtExtraDirections) {
  CounterRng rng(123);
  DyadicGrid g(1, 3);
  ConvexField f0 = random_full_field(g, 3, rng);
  ConvexField f1 = random_full_field(g, 3, rng);
  VectorField v(g, gaussian(3, 8, rng));
  const double p = 2.5;
  NormFunction rho = interpolate_norm(f0, f1, p, {v});
  for (std::int64_t c = 0; c < 8; ++c) {
    const Vec u = v.at(c);
    const double ref = std::pow(f0.at(c).gauge(u), 1 - 1 / p) * std::pow(f1.at(c).support(u), 1 / p);
    // The ball is the hull of the boundary points, so its gauge is the convex minorant.
    EXPECT_LE(rho.rho(c, u), ref * (1 + 1e-9));
  }
  NormFunction plain = interpolate_norm(f0, f1, p);
  for (std::int64_t c = 0; c < 8; ++c) EXPECT_LE(rho.rho(c, v.at(c)), plain.rho(c, v.at(c)) * (1 + 1e-9));
}

TEST(InterpolateNorm, HolderSplitting) {
  CounterRng rng(124);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 3;
    ConvexBody f0 = random_polytope(n, n + 3, rng);
    ConvexBody f1 = random_polytope(n, n + 3, rng);
    const double p = 1.1 + 4 * rng.uniform();
    const double pd = dual_exponent(p);
    Vec u = gaussian(n, rng);
    Vec v = gaussian(n, rng);
    const double rhs = std::pow(f0.support(u) * f0.gauge(v), 1 / pd) * std::pow(f1.support(u) * f1.gauge(v), 1 / p);
    EXPECT_LE(std::abs(u.dot(v)), rhs * (1 + 1e-9));
  }
}

TEST(VerifyRhoAp, ConstantWeight) {
  CounterRng rng(125);
  DyadicGrid g(1, 3);
  for (int n = 2; n <= 3; ++n) {
    NormFunction rho = weight_norm_function(constant_weight(g, spd(n, rng)));
    ApReport r = verify_rho_ap(rho, 2.5, all_cubes(g, 0, 3));
    EXPECT_NEAR(r.sup, 1.0, 1e-3);
    EXPECT_LE(r.bracket_lo, 1.0);
    EXPECT_GE(r.bracket_hi, 1.0 - 1e-3);
  }
}

TEST(VerifyRhoAp, ScalarExact) {
  CounterRng rng(126);
  DyadicGrid g(1, 3);
  std::vector<Mat> w;
  for (int c = 0; c < 8; ++c) w.push_back(Mat::Constant(1, 1, std::exp(rng.normal())));
  const double p = 3.0;
  MatrixWeight mw(g, w);
  const CubeCollection fam = all_cubes(g, 0, 3);
  ApReport r = verify_rho_ap(weight_norm_function(mw), p, fam);
  ApReport ref = ap_constant(LpWSpace{p, mw}, fam);
  for (std::size_t i = 0; i < fam.size(); ++i) EXPECT_NEAR(r.rows[i].value, ref.rows[i].value, 1e-12 * ref.rows[i].value);
}

TEST(VerifyRhoAp, AgreesWithWeightWithinN) {
  CounterRng rng(127);
  DyadicGrid g(1, 3);
  for (int n = 2; n <= 3; ++n) {
    MatrixWeight w = random_weight(g, n, rng);
    const CubeCollection fam = all_cubes(g, 0, 3);
    ApReport r = verify_rho_ap(weight_norm_function(w), 2.0, fam);
    ApReport ref = ap_constant(LpWSpace{2.0, w}, fam);
    EXPECT_LE(r.sup, n * ref.sup);
    EXPECT_GE(r.sup, ref.sup / n);
  }
}

TEST(ConstructWeight, ScalarConstants) {
  DyadicGrid g(1, 3);
  LpWSpace base{2.0, constant_weight(g, Mat::Constant(1, 1, 3.0))};
  VectorField one = VectorField::constant(g, Vec::Ones(1));
  ExtrapolationOptions opt;
  opt.k_trunc = 6;
  ExtrapolationCertificate cert = construct_weight(one, one, base, all_cubes(g, 0, 3), 3.0, opt);
  // The norm function is the same scalar multiple of |u| on every cell.
  const double r0 = cert.rho.rho(0, Vec::Ones(1));
  for (std::int64_t c = 1; c < 8; ++c) EXPECT_NEAR(cert.rho.rho(c, Vec::Ones(1)), r0, 1e-12 * r0);
  EXPECT_TRUE(cert.product_holds);
  EXPECT_LE(cert.product_lhs, 2 * cert.product_rhs * (1 + 1e-6));
  EXPECT_TRUE(cert.selection_holds);
}

TEST(ConstructWeight, RandomProductBound) {
  CounterRng rng(128);
  for (int t = 0; t < 8; ++t) {
    const int n = 1 + t % 3;
    DyadicGrid g(1, 3);
    const double p0 = 1.5 + 2 * rng.uniform();
    LpWSpace base{p0, constant_weight(g, Mat::Identity(n, n))};
    VectorField f(g, gaussian(n, 8, rng));
    VectorField h(g, gaussian(n, 8, rng));
    ExtrapolationOptions opt;
    opt.k_trunc = 6;
    opt.seed = t;
    ExtrapolationCertificate cert = construct_weight(f, h, base, all_cubes(g, 0, 3), p0, opt);
    EXPECT_LE(cert.product_lhs, 2 * cert.product_rhs * (1 + 1e-6)) << t;
    EXPECT_LE(cert.max_selection_gauge, 1 + 1e-12) << t;
    EXPECT_TRUE(cert.product_holds && cert.selection_holds);
    EXPECT_GT(cert.ap_of_rho, 0.0);
    EXPECT_LE(cert.ap_ratio, 10.0 * n);
    TransferDemo demo = sparse_transfer_demo(cert, CubeCollection(g, {unit_cube(1), DyadicCube{2, {1}}}));
    EXPECT_TRUE(demo.holds);
    EXPECT_LE(demo.pairing, demo.holder_bound * (1 + 1e-9));
  }
}
