#include "gen.hpp"

#include <mw/muckenhoupt.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace mw;
using namespace mwtest;

namespace {

MatrixWeight scalar_weight(const DyadicGrid& g, const std::vector<double>& w) {
  std::vector<Mat> m;
  for (double x : w) m.push_back(Mat::Constant(1, 1, x));
  return MatrixWeight(g, m);
}

// <w^p>_Q^{1/p} <w^{-p'}>_Q^{1/p'} from plain cell sums.
double scalar_ap(const std::vector<double>& w, const DyadicGrid& g, const DyadicCube& q, double p) {
  const double pd = dual_exponent(p);
  double a = 0.0;
  double b = 0.0;
  const std::int64_t first = g.first_cell(q);
  const std::int64_t span = g.cell_span(q);
  for (std::int64_t c = first; c < first + span; ++c) {
    a += std::pow(w[c], p);
    b += std::pow(w[c], -pd);
  }
  return std::pow(a / span, 1 / p) * std::pow(b / span, 1 / pd);
}

}  // namespace

TEST(ApConstant, ConstantWeight) {
  CounterRng rng(101);
  for (int t = 0; t < 6; ++t) {
    const int n = 1 + t % 3;
    DyadicGrid g(1 + t % 2, 2);
    const double p = t % 2 ? 2.0 : 1.3 + 3 * rng.uniform();
    ApReport r = ap_constant(LpWSpace{p, constant_weight(g, spd(n, rng))}, all_cubes(g, 0, 2));
    EXPECT_NEAR(r.sup, 1.0, 1e-6);
    EXPECT_LE(r.bracket_lo, 1 + 1e-6);
    EXPECT_GE(r.bracket_hi, 1 - 1e-6);
  }
}

TEST(ApConstant, PowerWeightScalarBruteForce) {
  DyadicGrid g(1, 8);
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::Power;
  spec.exponent = 0.7;
  LpWSpace s{2.0, make_weight(spec, g)};
  std::vector<double> w;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) w.push_back(std::pow((c + 0.5) / 256, 0.7));
  const CubeCollection fam = all_cubes(g, 0, 8);
  ApReport r = ap_constant(s, fam);
  double best = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double ref = scalar_ap(w, g, fam.cubes()[i], 2.0);
    EXPECT_NEAR(r.rows[i].value, ref, 1e-12 * ref);
    best = std::max(best, ref);
  }
  EXPECT_NEAR(r.sup, best, 1e-12 * best);
}

TEST(ApConstant, ScalarCollapseGeneralP) {
  CounterRng rng(102);
  for (int t = 0; t < 10; ++t) {
    DyadicGrid g(1 + t % 2, 3);
    std::vector<double> w;
    for (std::int64_t c = 0; c < g.cell_count(); ++c) w.push_back(std::exp(rng.normal()));
    const double p = 1.2 + 4 * rng.uniform();
    const CubeCollection fam = all_cubes(g, 0, 3);
    ApReport r = ap_constant(LpWSpace{p, scalar_weight(g, w)}, fam);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const double ref = scalar_ap(w, g, fam.cubes()[i], p);
      EXPECT_NEAR(r.rows[i].value, ref, 1e-12 * ref);
      EXPECT_NEAR(r.rows[i].upper, ref, 1e-12 * ref);
    }
  }
}

TEST(ApConstant, RotatingWeightGrowsWithAnisotropy) {
  DyadicGrid g(1, 5);
  double prev = 0.0;
  for (double lambda : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    WeightSpec spec;
    spec.kind = WeightSpec::Kind::Rotating;
    spec.n = 2;
    spec.omega = 3.0;
    spec.lambda = vec({1.0, lambda});
    ApReport r = ap_constant(LpWSpace{3.0, make_weight(spec, g)}, all_cubes(g, 0, 5));
    EXPECT_GE(r.sup, prev * 0.99);
    prev = r.sup;
  }
  EXPECT_GT(prev, 1.5);
}

TEST(ApConstant, WitnessValidity) {
  CounterRng rng(103);
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 2;
    DyadicGrid g(1, 3);
    const double p = 1.3 + 3 * rng.uniform();
    LpWSpace s{p, random_weight(g, n, rng)};
    ApReport r = ap_constant(s, all_cubes(g, 0, 3));
    for (const auto& row : r.rows) {
      const double direct = averaged_product(s, row.cube, row.u, row.v) / std::abs(row.u.dot(row.v));
      EXPECT_NEAR(direct, row.witness_constant, 1e-12 * direct);
      EXPECT_LE(row.witness_constant, row.upper * (1 + 1e-9));
      EXPECT_LE(row.witness_ratio, row.upper * (1 + 1e-9));
      EXPECT_LE(row.upper, n * row.value * (1 + 1e-5));
    }
  }
}

TEST(ApConstant, DualitySymmetry) {
  CounterRng rng(104);
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 2;
    DyadicGrid g(1, 3);
    const double p = t % 2 ? 2.0 : 1.3 + 3 * rng.uniform();
    LpWSpace s{p, random_weight(g, n, rng)};
    ApReport a = ap_constant(s, all_cubes(g, 0, 3));
    ApReport b = ap_constant(s.dual(), all_cubes(g, 0, 3));
    if (p == 2.0) EXPECT_NEAR(a.sup, b.sup, 1e-9 * a.sup);
    EXPECT_LE(a.bracket_lo, b.bracket_hi * (1 + 1e-9));
    EXPECT_LE(b.bracket_lo, a.bracket_hi * (1 + 1e-9));
  }
}

TEST(AStrong, SingleCubePartitions) {
  CounterRng rng(105);
  DyadicGrid g(1, 3);
  LpWSpace s{2.0, random_weight(g, 2, rng)};
  const CubeCollection fam = all_cubes(g, 0, 3);
  std::vector<CubeCollection> parts;
  for (const auto& q : fam.cubes()) parts.push_back(CubeCollection(g, {q}));
  StrongReport st = a_strong_constant(s, parts, 4, 9);
  ApReport ap = ap_constant(s, fam);
  EXPECT_NEAR(st.lower, ap.sup, 1e-9 * ap.sup);
  EXPECT_LE(st.lower, ap.bracket_hi * (1 + 1e-12));
  EXPECT_EQ(st.per_partition.size(), parts.size());
}

TEST(AStrong, ConstantWeight) {
  CounterRng rng(106);
  DyadicGrid g(2, 2);
  LpWSpace s{3.0, constant_weight(g, spd(2, rng))};
  std::vector<CubeCollection> parts = {all_cubes(g, 1, 1), all_cubes(g, 2, 2),
                                       CubeCollection(g, {DyadicCube{1, {0, 0}}, DyadicCube{2, {3, 3}}})};
  StrongReport st = a_strong_constant(s, parts, 8, 1);
  EXPECT_NEAR(st.lower, 1.0, 1e-6);
  EXPECT_NEAR(st.upper, 1.0, 1e-5);
}

TEST(AStrong, BelowApUpperBracket) {
  CounterRng rng(107);
  for (int t = 0; t < 8; ++t) {
    DyadicGrid g(1, 3);
    LpWSpace s{2.0, random_weight(g, 2, rng)};
    std::vector<CubeCollection> parts = {all_cubes(g, 1, 1), all_cubes(g, 2, 2),
                                         CubeCollection(g, {DyadicCube{1, {0}}, DyadicCube{3, {7}}})};
    StrongReport st = a_strong_constant(s, parts, 8, t);
    ApReport ap = ap_constant(s, all_cubes(g, 0, 3));
    EXPECT_LE(st.lower, ap.bracket_hi * (1 + 1e-12));
  }
}

TEST(WeakMaximal, ConstantFieldRatioOne) {
  CounterRng rng(108);
  DyadicGrid g(1, 3);
  LpWSpace s{2.0, constant_weight(g, spd(2, rng))};
  WeakReport r = weak_maximal_norm(s, all_cubes(g, 0, 3), 0, 0, {VectorField::constant(g, vec({1.0, -2.0}))});
  ASSERT_EQ(r.ratios.size(), 1u);
  EXPECT_NEAR(r.ratios[0], 1.0, 1e-12);
}

TEST(WeakMaximal, ScalarLevelSets) {
  CounterRng rng(109);
  for (int t = 0; t < 10; ++t) {
    DyadicGrid g(1, 4);
    const double p = 1.2 + 3 * rng.uniform();
    std::vector<double> w;
    for (int c = 0; c < 16; ++c) w.push_back(std::exp(rng.normal()));
    LpWSpace s{p, scalar_weight(g, w)};
    VectorField f(g, gaussian(1, 16, rng));
    const CubeCollection fam = all_cubes(g, 0, 4);
    // Mf(x) = max of <|f|>_Q over cubes containing x; the weak norm is
    // sup_t t w^p({Mf >= t})^{1/p}, attained at a value of Mf.
    std::vector<double> mf(16, 0.0);
    for (const auto& q : fam.cubes()) {
      double avg = 0.0;
      for (std::int64_t c = g.first_cell(q); c < g.first_cell(q) + g.cell_span(q); ++c) avg += std::abs(f.at(c)(0));
      avg /= static_cast<double>(g.cell_span(q));
      for (std::int64_t c = g.first_cell(q); c < g.first_cell(q) + g.cell_span(q); ++c) mf[c] = std::max(mf[c], avg);
    }
    double weak = 0.0;
    for (double level : mf) {
      double mass = 0.0;
      for (int c = 0; c < 16; ++c)
        if (mf[c] >= level) mass += std::pow(w[c], p) / 16;
      weak = std::max(weak, level * std::pow(mass, 1 / p));
    }
    WeakReport r = weak_maximal_norm(s, fam, 0, 0, {f});
    EXPECT_NEAR(r.ratios[0], weak / lp_norm(f, s), 1e-9 * r.ratios[0]);
  }
}

TEST(WeakMaximal, ChainWithInjectedWitness) {
  CounterRng rng(110);
  for (int t = 0; t < 4; ++t) {
    const int n = 2;
    DyadicGrid g(1, 3);
    LpWSpace s{2.0, random_weight(g, n, rng)};
    const CubeCollection fam = all_cubes(g, 0, 3);
    ApReport ap = ap_constant(s, fam);
    const CubeNorm cn = cube_norm(s, fam.cubes()[ap.argmax]);
    WeakReport weak = weak_maximal_norm(s, fam, 4, t, {cn.witness});
    EXPECT_LE(ap.sup, weak.ratio * (1 + 1e-9));
    EXPECT_LE(weak.ratio, 10 * n * 3 * ap.bracket_hi);
  }
}
