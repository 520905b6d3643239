#include "gen.hpp"

#include <mw/errors.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mw;
using namespace mwtest;

namespace {

double brute_support(const Mat& pts, const Vec& d) {
  double s = 0.0;
  for (int j = 0; j < pts.cols(); ++j) s = std::max(s, std::abs(pts.col(j).dot(d)));
  return s;
}

// Planar gauge from scratch: every supporting line through two of the points
// ±p_i gives a facet functional, and the gauge is the largest of them at u.
double planar_gauge(const Mat& pts, const Vec& u) {
  Mat all(2, 2 * pts.cols());
  all << pts, -pts;
  double g = 0.0;
  for (int i = 0; i < all.cols(); ++i) {
    for (int j = 0; j < all.cols(); ++j) {
      Vec e = all.col(j) - all.col(i);
      Vec nrm = vec({e(1), -e(0)});
      const double off = nrm.dot(all.col(i));
      if (e.norm() < 1e-12 || off <= 1e-12) continue;
      if ((nrm.transpose() * all).maxCoeff() > off * (1 + 1e-12)) continue;
      g = std::max(g, nrm.dot(u) / off);
    }
  }
  return g;
}

}  // namespace

TEST(DirectionGrid, Counts) {
  EXPECT_EQ(direction_grid(1).cols(), 2);
  EXPECT_EQ(direction_grid(2).cols(), 64);
  EXPECT_EQ(direction_grid(3).cols(), 194);
  EXPECT_EQ(direction_grid(4).cols(), 40);
  for (int n = 1; n <= 5; ++n) {
    const Mat& g = direction_grid(n);
    const Eigen::Index half = g.cols() / 2;
    EXPECT_LT((g.leftCols(half) + g.rightCols(half)).cwiseAbs().maxCoeff(), 1e-15);
    for (Eigen::Index j = 0; j < g.cols(); ++j) EXPECT_NEAR(g.col(j).norm(), 1.0, 1e-12);
  }
}

TEST(MakePolytope, SegmentAndPruning) {
  ConvexBody s = make_polytope({axis(2, 0)});
  EXPECT_EQ(s.kind(), BodyKind::Polytope);
  EXPECT_EQ(s.rank(), 1);
  EXPECT_EQ(s.vertex_count(), 1);
  EXPECT_DOUBLE_EQ(s.support(axis(2, 0)), 1.0);

  ConvexBody p = make_polytope({axis(2, 0), 0.5 * axis(2, 0)});
  EXPECT_EQ(p.vertex_count(), 1);
  EXPECT_NEAR(p.vertices().col(0).cwiseAbs()(0), 1.0, 1e-15);

  EXPECT_TRUE(make_polytope({Vec::Zero(3), Vec::Zero(3)}).is_zero());
  EXPECT_THROW(make_polytope({axis(2, 0), axis(3, 0)}), InputError);
}

TEST(MakePolytope, InputPointsInside) {
  CounterRng rng(11);
  for (int t = 0; t < 20; ++t) {
    Mat pts = gaussian(3, 20, rng);
    ConvexBody k = ConvexBody::from_points(pts);
    for (int j = 0; j < pts.cols(); ++j) {
      EXPECT_LE(k.gauge(pts.col(j)), 1 + 1e-9);
      EXPECT_LE(k.gauge(-pts.col(j)), 1 + 1e-9);
    }
  }
}

TEST(Support, Examples) {
  EXPECT_DOUBLE_EQ(make_polytope({axis(1, 0)}).support(axis(1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(ConvexBody::ellipsoid(diag({2, 3})).support(axis(2, 1)), 3.0);
  EXPECT_EQ(ConvexBody::zero(3).support(axis(3, 2)), 0.0);
}

TEST(Support, MatchesVertexScan) {
  CounterRng rng(12);
  for (int n = 1; n <= 5; ++n) {
    for (int t = 0; t < 10; ++t) {
      Mat pts = gaussian(n, 3 + 4 * t, rng);
      ConvexBody k = ConvexBody::from_points(pts);
      for (int r = 0; r < 20; ++r) {
        Vec d = gaussian(n, rng);
        EXPECT_NEAR(k.support(d), brute_support(pts, d), 1e-9 * (1 + d.norm() * pts.norm()));
      }
    }
  }
}

TEST(Gauge, Examples) {
  EXPECT_DOUBLE_EQ(ConvexBody::unit_ball(3).gauge(2 * axis(3, 0)), 2.0);
  EXPECT_EQ(make_polytope({axis(2, 0)}).gauge(axis(2, 1)), kInf);
  EXPECT_DOUBLE_EQ(make_polytope({axis(2, 0)}).gauge(-3 * axis(2, 0)), 3.0);
}

TEST(Gauge, MatchesDualOracle) {
  CounterRng rng(13);
  for (int t = 0; t < 10; ++t) {
    Mat pts = gaussian(2, 3 + t, rng);
    ConvexBody k = ConvexBody::from_points(pts);
    for (int r = 0; r < 10; ++r) {
      Vec u = gaussian(2, rng);
      EXPECT_NEAR(k.gauge(u), planar_gauge(pts, u), 1e-10 * k.gauge(u));
    }
  }
}

TEST(Gauge, HigherRankHomogeneousAndOnBoundary) {
  CounterRng rng(14);
  for (int n = 4; n <= 6; ++n) {
    ConvexBody k = random_polytope(n, 30, rng);
    for (int r = 0; r < 10; ++r) {
      Vec u = gaussian(n, rng);
      const double g = k.gauge(u);
      EXPECT_NEAR(k.gauge(2.5 * u), 2.5 * g, 1e-9 * g);
      // u/g on the boundary: some direction supports it.
      Vec b = u / g;
      double best = 0.0;
      const Mat& grid = direction_grid(n);
      for (int j = 0; j < grid.cols(); ++j) best = std::max(best, b.dot(grid.col(j)) / k.support(grid.col(j)));
      EXPECT_LE(best, 1 + 1e-9);
    }
  }
}

TEST(Duality, GaugeTimesSupport) {
  CounterRng rng(15);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 25; ++t) {
      ConvexBody k = t % 2 ? random_polytope(n, 2 + t, rng) : ConvexBody::ellipsoid(spd(n, rng));
      Vec u = gaussian(n, rng);
      Vec v = gaussian(n, rng);
      EXPECT_LE(std::abs(u.dot(v)), k.gauge(u) * k.support(v) * (1 + 1e-8));
    }
  }
}

TEST(ContainsBody, Examples) {
  CounterRng rng(16);
  for (int n = 1; n <= 4; ++n) {
    ConvexBody k = random_polytope(n, 8, rng);
    EXPECT_TRUE(contains_body(k, k, 0));
    EXPECT_FALSE(contains_body(k, k.scaled(0.5), 0));
    ConvexBody e = ConvexBody::ellipsoid(spd(n, rng));
    EXPECT_TRUE(contains_body(e.scaled(0.99), e, 0));
    EXPECT_FALSE(contains_body(e, e.scaled(0.9), 0));
  }
}

TEST(MinkowskiSum, Examples) {
  ConvexBody sq = minkowski_sum(make_polytope({axis(2, 0)}), make_polytope({axis(2, 1)}));
  ConvexBody ref = make_polytope({vec({1, 1}), vec({1, -1})});
  EXPECT_TRUE(contains_body(sq, ref, 1e-12));
  EXPECT_TRUE(contains_body(ref, sq, 1e-12));
  EXPECT_EQ(sq.vertex_count(), 2);

  CounterRng rng(17);
  ConvexBody k = random_polytope(3, 9, rng);
  ConvexBody s = minkowski_sum(k, ConvexBody::zero(3));
  EXPECT_TRUE(contains_body(s, k, 1e-12));
  EXPECT_TRUE(contains_body(k, s, 1e-12));
}

TEST(MinkowskiSum, SupportAdditivity) {
  CounterRng rng(18);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 5; ++t) {
      ConvexBody k = random_polytope(n, 4 + t, rng);
      ConvexBody l = random_polytope(n, 2 + t, rng);
      ConvexBody s = minkowski_sum(k, l);
      ASSERT_TRUE(s.exact());
      for (int r = 0; r < 100; ++r) {
        Vec d = gaussian(n, rng);
        const double ref = k.support(d) + l.support(d);
        EXPECT_NEAR(s.support(d), ref, 1e-9 * (1 + ref));
      }
    }
  }
}

TEST(HullUnion, Examples) {
  CounterRng rng(19);
  ConvexBody k = random_polytope(3, 10, rng);
  ConvexBody h = hull_union({k});
  EXPECT_TRUE(contains_body(h, k, 1e-9));
  EXPECT_TRUE(contains_body(k, h, 1e-9));

  ConvexBody cross = hull_union({make_polytope({axis(2, 0)}), make_polytope({axis(2, 1)})});
  EXPECT_EQ(cross.vertex_count(), 2);
  EXPECT_NEAR(cross.gauge(vec({0.5, 0.5})), 1.0, 1e-12);
}

TEST(HullUnion, ContainsInputsAndIsMinimal) {
  CounterRng rng(20);
  for (int n = 1; n <= 4; ++n) {
    std::vector<ConvexBody> parts;
    Mat all(n, 0);
    for (int i = 0; i < 4; ++i) {
      Mat pts = gaussian(n, 3, rng);
      parts.push_back(ConvexBody::from_points(pts));
      Mat grown(n, all.cols() + 3);
      grown << all, pts;
      all = grown;
    }
    ConvexBody h = hull_union(parts);
    for (const auto& p : parts) EXPECT_TRUE(contains_body(p, h, 1e-9));
    for (int r = 0; r < 50; ++r) {
      Vec d = gaussian(n, rng);
      EXPECT_NEAR(h.support(d), brute_support(all, d), 1e-9 * (1 + d.norm() * all.norm()));
    }
  }
}

TEST(Pruning, SupportAgreesWithRawPoints) {
  CounterRng rng(21);
  for (int n = 2; n <= 3; ++n) {
    Mat pts = gaussian(n, 400, rng);
    ConvexBody k = ConvexBody::from_points(pts);
    EXPECT_LT(k.vertex_count(), 400);
    for (int r = 0; r < 200; ++r) {
      Vec d = gaussian(n, rng);
      EXPECT_NEAR(k.support(d), brute_support(pts, d), 1e-9 * (1 + d.norm() * pts.norm()));
    }
  }
}

TEST(Loewner, EllipsoidFixedPoint) {
  CounterRng rng(22);
  for (int n = 2; n <= 4; ++n) {
    Mat a = spd(n, rng, 0.5);
    Mat l = loewner_ellipsoid(ConvexBody::ellipsoid(a), 1e-6);
    Mat ll = l * l.transpose();
    Mat aa = a * a;
    // The polytope stand-in for the ellipsoid sits inside it, so compare with grid slack.
    EXPECT_LT(spectral_norm(ll - aa) / spectral_norm(aa), 0.05) << n;
  }
}

TEST(Loewner, SquareGivesCircle) {
  ConvexBody sq = make_polytope({vec({1, 1}), vec({1, -1})});
  Mat l = loewner_ellipsoid(sq, 1e-8);
  Mat ll = l * l.transpose();
  EXPECT_NEAR(ll(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(ll(1, 1), 2.0, 1e-6);
  EXPECT_NEAR(ll(0, 1), 0.0, 1e-6);
}

TEST(Loewner, RandomSandwich) {
  CounterRng rng(23);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 5; ++t) {
      ConvexBody k = random_polytope(n, 6 + 3 * t, rng);
      EllipsoidFit fit = loewner_fit(k, 1e-6);
      ConvexBody outer = ConvexBody::ellipsoid(fit.outer);
      ConvexBody inner = ConvexBody::ellipsoid(fit.inner);
      EXPECT_TRUE(contains_body(k, outer, 1e-5));
      EXPECT_LE(k.max_gauge(inner.boundary_points()), 1 + 1e-9);
      EXPECT_LE(inflation_factor(outer, inner), std::sqrt(n) * (1 + 1e-5));
    }
  }
}

TEST(John, UnitBall) {
  JohnPair j = john_basis(ConvexBody::unit_ball(3));
  ConvexBody e = ConvexBody::ellipsoid(j.inscribed());
  ConvexBody ball = ConvexBody::unit_ball(3);
  EXPECT_TRUE(contains_body(e.scaled(1 / (1 + 1e-5)), ball.as_polytope(), 1e-5));
  EXPECT_TRUE(contains_body(ball.as_polytope(), e.scaled(std::sqrt(3.0) * (1 + 1e-5)), 1e-5));
  EXPECT_LE(j.semiaxes.maxCoeff() / j.semiaxes.minCoeff(), 1 + 1e-3);
}

TEST(John, AxisAlignedEllipse) {
  JohnPair j = john_basis(ConvexBody::ellipsoid(diag({2, 3})));
  ASSERT_EQ(j.rank, 2);
  EXPECT_GE(j.semiaxes(0), j.semiaxes(1));
  EXPECT_NEAR(std::abs(j.basis(1, 0)), 1.0, 1e-3);
  EXPECT_NEAR(std::abs(j.basis(0, 1)), 1.0, 1e-3);
  EXPECT_NEAR(j.semiaxes(0) / j.semiaxes(1), 1.5, 1e-2);
  EXPECT_LE(j.semiaxes(0), 3.0 * (1 + 1e-9));
  EXPECT_GE(j.semiaxes(0) * std::sqrt(2.0), 3.0 * (1 - 1e-2));
}

TEST(John, RandomSandwich) {
  CounterRng rng(24);
  for (int n = 1; n <= 5; ++n) {
    for (int t = 0; t < 4; ++t) {
      ConvexBody k = random_polytope(n, n + 2 + 5 * t, rng);
      JohnPair j = john_basis(k);
      ConvexBody e = ConvexBody::ellipsoid(j.inscribed());
      EXPECT_LE(k.max_gauge(e.boundary_points()), 1 + 1e-5);
      EXPECT_TRUE(contains_body(k, e.scaled(std::sqrt(n) * (1 + 1e-5)), 1e-5));
      Mat g = j.basis.transpose() * j.basis;
      EXPECT_LT((g - Mat::Identity(n, n)).norm(), 1e-10);
    }
  }
}

TEST(John, RankDeficient) {
  ConvexBody seg = make_polytope({vec({1, 1, 0})});
  JohnPair j = john_basis(seg);
  EXPECT_EQ(j.rank, 1);
  EllipsoidFit fit = loewner_fit(seg);
  EXPECT_EQ(fit.rank, 1);
}

TEST(Hausdorff, Examples) {
  CounterRng rng(25);
  ConvexBody k = random_polytope(3, 8, rng);
  EXPECT_NEAR(hausdorff(k, k), 0.0, 1e-7);
  ConvexBody b = ConvexBody::unit_ball(2);
  EXPECT_NEAR(hausdorff(b, b.scaled(2)), 1.0, 1e-3);
}

TEST(Hausdorff, AgreesWithSupportGrid) {
  CounterRng rng(26);
  for (int t = 0; t < 10; ++t) {
    ConvexBody k = random_polytope(2, 5, rng);
    ConvexBody l = random_polytope(2, 4, rng);
    double grid = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double a = 2 * std::numbers::pi * i / 20000;
      Vec d = vec({std::cos(a), std::sin(a)});
      grid = std::max(grid, std::abs(k.support(d) - l.support(d)));
    }
    const double h = hausdorff(k, l);
    EXPECT_NEAR(h, grid, 1e-4 * (1 + grid));
    EXPECT_NEAR(hausdorff(l, k), h, 1e-6 * (1 + h));
  }
}

TEST(Hausdorff, WeightedMetric) {
  ConvexBody b = ConvexBody::unit_ball(2).as_polytope();
  Mat a = diag({3, 1});
  // Along e1 the gap between the balls is 1 and is stretched by 3.
  EXPECT_NEAR(hausdorff(b, b.scaled(2), a), 3.0, 1e-3);
}
