#include "mw/muckenhoupt.hpp"

#include "mw/errors.hpp"
#include "mw/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mw {

double averaged_product(const LpWSpace& s, const DyadicCube& q, const Vec& u, const Vec& v) {
  const LpWSpace d = s.dual();
  return indicator_norm(s, q, u) * indicator_norm(d, q, v) / q.measure();
}

ApReport ap_constant(const LpWSpace& s, const CubeCollection& fam, double eps, int jobs) {
  if (fam.empty()) throw InputError("ap_constant: empty cube family");
  ApReport rep;
  rep.p = s.p;
  rep.rows.resize(fam.size());
  parallel_for(fam.size(), jobs, [&](std::size_t i) {
    const CubeNorm cn = cube_norm(s, fam.cubes()[i], eps);
    ApRow& row = rep.rows[i];
    row.cube = cn.cube;
    row.value = cn.value;
    row.upper = cn.upper;
    row.witness_ratio = cn.witness_ratio;
    row.u = cn.u;
    row.v = cn.v;
    row.witness_constant = averaged_product(s, cn.cube, cn.u, cn.v) / std::abs(cn.u.dot(cn.v));
  });
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const ApRow& row = rep.rows[i];
    if (rep.argmax < 0 || row.value > rep.sup) {
      rep.sup = row.value;
      rep.argmax = static_cast<int>(i);
    }
    rep.bracket_lo = std::max(rep.bracket_lo, row.witness_ratio);
    rep.bracket_hi = std::max(rep.bracket_hi, row.upper);
  }
  return rep;
}

StrongReport a_strong_constant(const LpWSpace& s, const std::vector<CubeCollection>& partitions, int trials,
                               std::uint64_t seed, double eps) {
  StrongReport rep;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    const AveragingOperator op = AveragingOperator::disjoint(partitions[i]);
    const OperatorReport r = operator_norm_estimate(op, s, NormMode::Probe, trials, seed ^ (i << 32), eps);
    rep.per_partition.push_back(r.bracket_lo);
    rep.lower = std::max(rep.lower, r.bracket_lo);
    rep.upper = std::max(rep.upper, r.bracket_hi);
  }
  return rep;
}

WeakReport weak_maximal_norm(const LpWSpace& s, const CubeCollection& c, int trials, std::uint64_t seed,
                             const std::vector<VectorField>& extra, int jobs) {
  if (trials < 0) throw InputError("weak_maximal_norm: negative trial count");
  WeakReport rep;
  const CounterRng base(seed);
  const int total = static_cast<int>(extra.size()) + trials;
  for (int t = 0; t < total; ++t) {
    VectorField f;
    if (t < static_cast<int>(extra.size())) {
      f = extra[t];
    } else {
      CounterRng rng = base.substream(static_cast<std::uint64_t>(t - extra.size()));
      f = random_vector_field(s.grid(), s.n(), rng);
    }
    const double den = lp_norm(f, s);
    if (den == 0.0) {
      rep.ratios.push_back(0.0);
      continue;
    }
    const ConvexField mf = maximal(kf(f), c, kVertexCap, jobs);
    std::vector<Vec> cands;
    for (const auto& q : c.cubes()) cands.push_back(f.average(q));
    for (std::int64_t cell = 0; cell < mf.cells(); ++cell) {
      const Mat pts = mf.at(cell).boundary_points();
      for (Eigen::Index j = 0; j < pts.cols(); ++j) cands.push_back(pts.col(j));
    }
    const double r = weak_body_norm(mf, s, cands) / den;
    rep.ratios.push_back(r);
    if (r > rep.ratio) {
      rep.ratio = r;
      rep.best_probe = t;
    }
  }
  return rep;
}

}  // namespace mw
