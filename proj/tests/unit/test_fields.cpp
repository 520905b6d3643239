#include "gen.hpp"

#include <mw/errors.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace mw;
using namespace mwtest;

namespace {

VectorField random_field(const DyadicGrid& g, int n, CounterRng& rng) {
  return VectorField(g, gaussian(n, static_cast<int>(g.cell_count()), rng));
}

ConvexField random_bodies(const DyadicGrid& g, int n, CounterRng& rng) {
  std::vector<ConvexBody> cells;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const std::uint64_t kind = rng.below(4);
    if (kind == 0) cells.push_back(ConvexBody::zero(n));
    else if (kind == 1) cells.push_back(ConvexBody::ellipsoid(spd(n, rng)));
    else cells.push_back(random_polytope(n, 1 + static_cast<int>(rng.below(5)), rng));
  }
  return ConvexField(g, n, cells);
}

}  // namespace

TEST(Kf, Examples) {
  DyadicGrid g(2, 2);
  ConvexField z = kf(VectorField::zero(g, 3));
  for (std::int64_t c = 0; c < g.cell_count(); ++c) EXPECT_TRUE(z.at(c).is_zero());
  ConvexField e = kf(VectorField::constant(g, axis(2, 0)));
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    EXPECT_EQ(e.at(c).rank(), 1);
    EXPECT_DOUBLE_EQ(e.at(c).support(axis(2, 0)), 1.0);
    EXPECT_DOUBLE_EQ(e.at(c).support(axis(2, 1)), 0.0);
  }
}

TEST(Kf, SupportIsAbsolutePairing) {
  CounterRng rng(41);
  DyadicGrid g(1, 4);
  VectorField f = random_field(g, 3, rng);
  ConvexField k = kf(f);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    Vec d = gaussian(3, rng);
    EXPECT_NEAR(k.at(c).support(d), std::abs(f.at(c).dot(d)), 1e-12 * (1 + f.at(c).norm() * d.norm()));
  }
}

TEST(Dominates, Examples) {
  CounterRng rng(42);
  DyadicGrid g(1, 3);
  VectorField f = random_field(g, 2, rng);
  EXPECT_TRUE(dominates(f, VectorField(g, 0.5 * f.values())));
  CellVerdict v = dominates(VectorField::constant(g, axis(2, 0)), VectorField::constant(g, axis(2, 1)));
  EXPECT_FALSE(v);
  ASSERT_TRUE(v.cell);
  EXPECT_EQ(*v.cell, 0);
  EXPECT_FALSE(dominates(f, VectorField(g, 1.01 * f.values())));
}

TEST(Dominates, RandomMultipliers) {
  CounterRng rng(43);
  for (int t = 0; t < 20; ++t) {
    DyadicGrid g(2, 2);
    VectorField f = random_field(g, 3, rng);
    Mat gv = f.values();
    for (int c = 0; c < gv.cols(); ++c) gv.col(c) *= rng.uniform(-1, 1);
    EXPECT_TRUE(dominates(f, VectorField(g, gv)));
  }
}

TEST(Aumann, Examples) {
  CounterRng rng(44);
  DyadicGrid g(2, 3);
  ConvexBody k = random_polytope(3, 6, rng);
  ConvexField f = ConvexField::constant(g, k);
  DyadicCube q{1, {1, 0}};
  ConvexBody avg = aumann_average(f, q);
  EXPECT_TRUE(contains_body(avg, k, 1e-9));
  EXPECT_TRUE(contains_body(k, avg, 1e-9));

  Vec u = vec({0.3, -2.0, 1.0});
  ConvexBody seg = aumann_average(kf(VectorField::constant(g, u)), q);
  EXPECT_EQ(seg.rank(), 1);
  EXPECT_NEAR(seg.gauge(u), 1.0, 1e-12);

  EXPECT_THROW(aumann_average(f, DyadicCube{4, {0, 0}}), InputError);
}

TEST(Aumann, SupportIdentity) {
  CounterRng rng(45);
  for (int n = 1; n <= 3; ++n) {
    DyadicGrid g(1 + n % 2, 2);
    ConvexField f = random_bodies(g, n, rng);
    const CubeCollection all = all_cubes(g, 0, g.depth());
    for (const auto& q : all.cubes()) {
      ConvexBody avg = aumann_average(f, q);
      for (int r = 0; r < 10; ++r) {
        Vec d = gaussian(n, rng);
        double ref = 0.0;
        const std::int64_t first = g.first_cell(q);
        for (std::int64_t c = first; c < first + g.cell_span(q); ++c) ref += f.at(c).support(d);
        ref /= static_cast<double>(g.cell_span(q));
        // Ellipsoid cells enter the sum as grid polytopes, inside the ellipsoid.
        EXPECT_LE(avg.support(d), ref * (1 + 1e-8) + 1e-12);
        EXPECT_NEAR(avg.support(d), ref, 0.02 * ref + 1e-12);
        EXPECT_NEAR(average_support(f, q, d), ref, 1e-10 * (1 + ref));
      }
    }
  }
}

TEST(Aumann, ExactForPolytopeCells) {
  CounterRng rng(46);
  DyadicGrid g(1, 3);
  std::vector<ConvexBody> cells;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) cells.push_back(random_polytope(2, 3, rng));
  ConvexField f(g, 2, cells);
  ConvexBody avg = aumann_average(f, unit_cube(1));
  for (int r = 0; r < 100; ++r) {
    Vec d = gaussian(2, rng);
    double ref = 0.0;
    for (const auto& b : cells) ref += b.support(d);
    ref /= 8;
    EXPECT_NEAR(avg.support(d), ref, 1e-9 * (1 + ref));
  }
}

TEST(SupWeightedRadius, Examples) {
  CounterRng rng(47);
  DyadicGrid g(1, 3);
  MatrixWeight id = constant_weight(g, Mat::Identity(3, 3));
  for (double h : sup_weighted_radius(ConvexField::constant(g, ConvexBody::unit_ball(3)), id)) EXPECT_NEAR(h, 1.0, 1e-12);

  MatrixWeight w = random_weight(g, 3, rng);
  VectorField f = random_field(g, 3, rng);
  auto h = sup_weighted_radius(kf(f), w);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) EXPECT_NEAR(h[c], (w.at(c) * f.at(c)).norm(), 1e-12 * (1 + h[c]));
}

TEST(SupWeightedRadius, MatchesBoundarySampling) {
  CounterRng rng(48);
  DyadicGrid g(1, 2);
  MatrixWeight w = random_weight(g, 2, rng);
  std::vector<ConvexBody> cells;
  for (int c = 0; c < 4; ++c) cells.push_back(c % 2 ? ConvexBody::ellipsoid(spd(2, rng)) : random_polytope(2, 4, rng));
  ConvexField f(g, 2, cells);
  auto h = sup_weighted_radius(f, w);
  for (int c = 0; c < 4; ++c) {
    double sampled = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double t = 2 * std::numbers::pi * i / 20000;
      Vec d = vec({std::cos(t), std::sin(t)});
      Vec x = cells[c].kind() == BodyKind::Ellipsoid ? Vec(cells[c].shape() * d)
                                                     : Vec(d / cells[c].gauge(d));
      sampled = std::max(sampled, (w.at(c) * x).norm());
    }
    // Sampling error is quadratic at an ellipsoid's smooth maximum, linear at a polytope vertex.
    EXPECT_LE(sampled, h[c] * (1 + 1e-12));
    EXPECT_NEAR(h[c], sampled, (c % 2 ? 1e-6 : 1e-3) * h[c]);
  }
}

TEST(MakeWeight, Constant) {
  DyadicGrid g(2, 2);
  WeightSpec spec;
  spec.n = 3;
  spec.a = Mat::Identity(3, 3);
  MatrixWeight w = make_weight(spec, g);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) EXPECT_EQ(w.at(c), Mat::Identity(3, 3));
}

TEST(MakeWeight, Power) {
  DyadicGrid g(1, 4);
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::Power;
  spec.n = 1;
  spec.exponent = 0.5;
  spec.axis = 1;
  MatrixWeight w = make_weight(spec, g);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) EXPECT_DOUBLE_EQ(w.at(c)(0, 0), std::sqrt((c + 0.5) / 16));
}

TEST(MakeWeight, Rotating) {
  DyadicGrid g(1, 4);
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::Rotating;
  spec.n = 2;
  spec.omega = 2 * std::numbers::pi;
  spec.lambda = vec({1, 4});
  MatrixWeight w = make_weight(spec, g);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const double x = (c + 0.5) / 16;
    Mat r = plane_rotation(2, spec.omega * x);
    Mat ref = r * diag({1, 4}) * r.transpose();
    EXPECT_LT((w.at(c) - ref).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(w.at(c));
    EXPECT_NEAR(es.eigenvalues()(0), 1.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), 4.0, 1e-12);
    EXPECT_LT((w.inverse_at(c) * w.at(c) - Mat::Identity(2, 2)).norm(), 1e-12);
  }
}

TEST(MakeWeight, RejectsNonSpdNamingCell) {
  DyadicGrid g(1, 2);
  std::vector<Mat> vals(4, Mat::Identity(2, 2));
  vals[2] = diag({1, -1});
  try {
    MatrixWeight w(g, vals);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("cell 2"), std::string::npos);
  }
  vals[2] = diag({1, 1e-13});
  EXPECT_THROW(MatrixWeight(g, vals), InputError);
}

TEST(FieldFiles, RoundTrip) {
  CounterRng rng(49);
  DyadicGrid g(2, 2);
  VectorField f = random_field(g, 2, rng);
  std::stringstream sv;
  write_vector_field(sv, f);
  VectorField fb = read_vector_field(sv);
  EXPECT_EQ(fb.grid(), g);
  EXPECT_EQ(fb.values(), f.values());

  ConvexField k = random_bodies(g, 2, rng);
  std::stringstream sk;
  write_convex_field(sk, k);
  ConvexField kb = read_convex_field(sk);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    for (int r = 0; r < 5; ++r) {
      Vec d = gaussian(2, rng);
      EXPECT_NEAR(kb.at(c).support(d), k.at(c).support(d), 1e-12 * (1 + k.at(c).support(d)));
    }
  }

  MatrixWeight w = random_weight(g, 2, rng);
  std::stringstream sw;
  write_weight(sw, w);
  MatrixWeight wb = read_weight(sw);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) EXPECT_EQ(wb.at(c), w.at(c));
}
