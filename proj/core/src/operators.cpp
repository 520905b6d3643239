#include "mw/operators.hpp"

#include "mw/errors.hpp"
#include "mw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mw {
namespace {

std::string cube_label(const DyadicCube& q) {
  std::ostringstream s;
  s << q.level;
  for (auto c : q.corner) s << ':' << c;
  return s.str();
}

void require_disjoint(const CubeCollection& p) {
  const Verdict v = is_pairwise_disjoint(p);
  if (!v) throw InputError("collection is not pairwise disjoint: cubes " + cube_label(*v.witness) + " and " +
                           cube_label(*v.other) + " overlap");
}

void require_sparse(const CubeCollection& s) {
  const Verdict v = is_sparse(s);
  if (!v) throw InputError("collection is not sparse at cube " + cube_label(*v.witness));
}

std::vector<ConvexBody> cube_averages(const ConvexField& f, const CubeCollection& c) {
  std::vector<ConvexBody> avg;
  avg.reserve(c.size());
  for (const auto& q : c.cubes()) avg.push_back(aumann_average(f, q));
  return avg;
}

}  // namespace

ConvexField t_cube(const ConvexField& f, const DyadicCube& q) {
  if (!f.grid().contains(q)) throw InputError("t_cube: cube outside grid");
  std::vector<ConvexBody> cells(f.cells(), ConvexBody::zero(f.n()));
  const ConvexBody avg = aumann_average(f, q);
  const std::int64_t first = f.grid().first_cell(q);
  for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) cells[c] = avg;
  return ConvexField(f.grid(), f.n(), std::move(cells), f.cap());
}

ConvexField t_disjoint(const ConvexField& f, const CubeCollection& p) {
  require_disjoint(p);
  std::vector<ConvexBody> cells(f.cells(), ConvexBody::zero(f.n()));
  for (const auto& q : p.cubes()) {
    const ConvexBody avg = aumann_average(f, q);
    const std::int64_t first = f.grid().first_cell(q);
    for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) cells[c] = avg;
  }
  return ConvexField(f.grid(), f.n(), std::move(cells), f.cap());
}

ConvexField t_sparse(const ConvexField& f, const CubeCollection& s) {
  require_sparse(s);
  const std::vector<ConvexBody> avg = cube_averages(f, s);
  const auto member = s.memberships();
  std::vector<ConvexBody> cells(f.cells(), ConvexBody::zero(f.n()));
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    std::vector<ConvexBody> terms;
    for (int i : member[c]) terms.push_back(avg[i]);
    if (!terms.empty()) cells[c] = minkowski_sum(terms, f.cap());
  }
  return ConvexField(f.grid(), f.n(), std::move(cells), f.cap());
}

ConvexField maximal(const ConvexField& f, const CubeCollection& c, int cap, int jobs) {
  if (!(f.grid() == c.grid())) throw InputError("maximal: grids differ");
  std::vector<ConvexBody> avg(c.size());
  parallel_for(c.size(), jobs, [&](std::size_t i) { avg[i] = aumann_average(f, c.cubes()[i]); });
  const auto member = c.memberships();
  std::vector<ConvexBody> cells(f.cells(), ConvexBody::zero(f.n()));
  parallel_for(static_cast<std::size_t>(f.cells()), jobs, [&](std::size_t cell) {
    std::vector<ConvexBody> terms;
    for (int i : member[cell]) terms.push_back(avg[i]);
    if (!terms.empty()) cells[cell] = hull_union(terms, cap);
  });
  return ConvexField(f.grid(), f.n(), std::move(cells), cap);
}

VectorField t_cube(const VectorField& f, const DyadicCube& q) {
  if (!f.grid().contains(q)) throw InputError("t_cube: cube outside grid");
  Mat out = Mat::Zero(f.n(), f.cells());
  const Vec avg = f.average(q);
  const std::int64_t first = f.grid().first_cell(q);
  for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) out.col(c) = avg;
  return VectorField(f.grid(), std::move(out));
}

VectorField t_disjoint(const VectorField& f, const CubeCollection& p) {
  require_disjoint(p);
  Mat out = Mat::Zero(f.n(), f.cells());
  for (const auto& q : p.cubes()) {
    const Vec avg = f.average(q);
    const std::int64_t first = f.grid().first_cell(q);
    for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) out.col(c) = avg;
  }
  return VectorField(f.grid(), std::move(out));
}

VectorField t_sparse(const VectorField& f, const CubeCollection& s) {
  require_sparse(s);
  Mat out = Mat::Zero(f.n(), f.cells());
  for (const auto& q : s.cubes()) {
    const Vec avg = f.average(q);
    const std::int64_t first = f.grid().first_cell(q);
    for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) out.col(c) += avg;
  }
  return VectorField(f.grid(), std::move(out));
}

AveragingOperator AveragingOperator::cube(const DyadicGrid& grid, const DyadicCube& q) {
  return AveragingOperator{Kind::Cube, CubeCollection(grid, {q})};
}

AveragingOperator AveragingOperator::disjoint(const CubeCollection& p) {
  require_disjoint(p);
  return AveragingOperator{Kind::Disjoint, p};
}

AveragingOperator AveragingOperator::sparse(const CubeCollection& s) {
  require_sparse(s);
  return AveragingOperator{Kind::Sparse, s};
}

std::string AveragingOperator::id() const {
  switch (kind) {
    case Kind::Cube: return "T_Q[" + cube_label(cubes.cubes().front()) + "]";
    case Kind::Disjoint: return "T_P[" + std::to_string(cubes.size()) + "]";
    case Kind::Sparse: return "T_S[" + std::to_string(cubes.size()) + "]";
  }
  return "";
}

VectorField AveragingOperator::apply(const VectorField& f) const {
  switch (kind) {
    case Kind::Cube: return t_cube(f, cubes.cubes().front());
    case Kind::Disjoint: return t_disjoint(f, cubes);
    case Kind::Sparse: return t_sparse(f, cubes);
  }
  return f;
}

namespace {

// f = 1_Q W^{-2} y |W^{-1} y|^{p'-2}, the dual extremizer of 1_Q y.
VectorField dual_witness(const LpWSpace& s, const DyadicCube& q, const Vec& y) {
  const DyadicGrid& grid = s.grid();
  const double pd = dual_exponent(s.p);
  const std::int64_t first = grid.first_cell(q);
  const std::int64_t span = grid.cell_span(q);
  Mat out = Mat::Zero(s.n(), grid.cell_count());
  if (std::isinf(pd)) {
    std::int64_t best = first;
    double top = -1.0;
    for (std::int64_t c = first; c < first + span; ++c) {
      const double len = (s.w.inverse_at(c) * y).norm();
      if (len > top) top = len, best = c;
    }
    out.col(best) = s.w.inverse_at(best) * (s.w.inverse_at(best) * y);
    return VectorField(grid, std::move(out));
  }
  for (std::int64_t c = first; c < first + span; ++c) {
    const Vec z = s.w.inverse_at(c) * y;
    out.col(c) = s.w.inverse_at(c) * z * std::pow(z.norm(), pd - 2.0);
  }
  return VectorField(grid, std::move(out));
}

double cube_ratio(const LpWSpace& s, const DyadicCube& q, const VectorField& f) {
  const double den = lp_norm(f, s);
  return den == 0.0 ? 0.0 : indicator_norm(s, q, f.average(q)) / den;
}

}  // namespace

CubeNorm cube_norm(const LpWSpace& s, const DyadicCube& q, double eps) {
  const ReducingMatrix ax = reducing_matrix(s, q, eps);
  const ReducingMatrix axd = reducing_matrix(s.dual(), q, eps);
  const Mat prod = ax.a * axd.a;
  Eigen::JacobiSVD<Mat> svd(prod, Eigen::ComputeFullV);
  Vec r = svd.matrixV().col(0);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (std::abs(r(i)) > 1e-12) {
      if (r(i) < 0) r = -r;
      break;
    }
  }
  CubeNorm out;
  out.cube = q;
  out.value = svd.singularValues()(0) / q.measure();
  out.sandwich = ax.sandwich * axd.sandwich;
  out.upper = out.sandwich * out.value;
  out.u = axd.a * r;
  out.v = axd.a.ldlt().solve(r);

  Vec best_y = out.v;
  out.witness = dual_witness(s, q, best_y);
  out.witness_ratio = cube_ratio(s, q, out.witness);
  if (ax.exact && axd.exact && s.p == 2.0) return out;

  auto consider = [&](const Vec& y) {
    VectorField f = dual_witness(s, q, y);
    const double r2 = cube_ratio(s, q, f);
    if (r2 > out.witness_ratio) {
      out.witness_ratio = r2;
      out.witness = std::move(f);
      best_y = y;
      return true;
    }
    return false;
  };
  const Mat& grid = direction_grid(s.n());
  for (Eigen::Index j = 0; j < grid.cols() / 2; ++j) consider(grid.col(j));
  CounterRng rng(0x5EEDC0BEULL);
  double step = 0.25;
  for (int it = 0; it < 100 && step > 1e-6; ++it) {
    Vec y = best_y / best_y.norm();
    Vec g(s.n());
    for (int i = 0; i < s.n(); ++i) g(i) = rng.normal();
    if (!consider(y + step * g)) step *= 0.7;
  }
  return out;
}

OperatorReport operator_norm_estimate(const AveragingOperator& op, const LpWSpace& s, NormMode mode, int trials,
                                      std::uint64_t seed, double eps) {
  OperatorReport rep;
  rep.op = op.id();
  rep.space = "LpW";
  rep.p = s.p;
  rep.seed = seed;
  if (mode == NormMode::ExactSmall) {
    if (op.kind == AveragingOperator::Kind::Sparse)
      throw UnsupportedError("operator_norm_estimate: exact mode needs a cube or a disjoint collection");
    if (op.kind == AveragingOperator::Kind::Disjoint && s.n() != 1)
      throw UnsupportedError("operator_norm_estimate: exact mode for T_P needs n = 1");
    rep.bracket_hi = 0.0;
    for (const auto& q : op.cubes.cubes()) {
      CubeNorm cn = cube_norm(s, q, eps);
      rep.norm_estimate = std::max(rep.norm_estimate, cn.value);
      rep.bracket_hi = std::max(rep.bracket_hi, cn.upper);
      if (cn.witness_ratio > rep.bracket_lo) {
        rep.bracket_lo = cn.witness_ratio;
        rep.witness = std::move(cn.witness);
      }
    }
    return rep;
  }

  const DyadicGrid& grid = s.grid();
  auto ratio = [&](const VectorField& f) {
    const double den = lp_norm(f, s);
    return den == 0.0 ? 0.0 : lp_norm(op.apply(f), s) / den;
  };
  auto consider = [&](VectorField f) {
    const double r = ratio(f);
    if (r > rep.bracket_lo) {
      rep.bracket_lo = r;
      rep.witness = std::move(f);
    }
  };
  double hi = 0.0;
  const std::size_t structured = std::min<std::size_t>(op.cubes.size(), 64);
  for (std::size_t i = 0; i < structured; ++i) {
    CubeNorm cn = cube_norm(s, op.cubes.cubes()[i], eps);
    hi = std::max(hi, cn.upper);
    consider(std::move(cn.witness));
  }
  for (std::size_t i = structured; i < op.cubes.size() && op.kind != AveragingOperator::Kind::Sparse; ++i)
    hi = std::max(hi, cube_norm(s, op.cubes.cubes()[i], eps).upper);
  const CounterRng base(seed);
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(t));
    consider(random_vector_field(grid, s.n(), rng));
  }
  rep.trials = trials;
  rep.norm_estimate = rep.bracket_lo;
  rep.bracket_hi = op.kind == AveragingOperator::Kind::Sparse ? kInf : hi;
  return rep;
}

double maximal_norm_probe(const LpWSpace& s, const CubeCollection& c, int trials, std::uint64_t seed) {
  const CounterRng base(seed);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(t));
    const ConvexField f = random_convex_field(s.grid(), s.n(), 2, 0.5, rng);
    const double den = body_norm(f, s);
    if (den == 0.0) continue;
    best = std::max(best, body_norm(maximal(f, c), s) / den);
  }
  return best;
}

RdfResult rdf(const ConvexField& f, const CubeCollection& c, const LpWSpace& s, int k_trunc, double m_hat,
              int iterate_cap, int jobs) {
  if (!(m_hat > 0.0)) throw InputError("rdf: norm bound must be positive");
  if (k_trunc < 0) throw InputError("rdf: truncation must be nonnegative");
  RdfResult res;
  const double norm0 = body_norm(f, s);
  std::vector<ConvexField> iterates;
  double prev = norm0;
  double m = m_hat;
  ConvexField g = f;
  for (int k = 1; k <= k_trunc; ++k) {
    g = maximal(g, c, iterate_cap, jobs);
    const double cur = body_norm(g, s);
    const double ratio = prev == 0.0 ? 0.0 : cur / prev;
    res.step_ratios.push_back(ratio);
    m = std::max(m, ratio);
    prev = cur;
    iterates.push_back(g);
  }
  res.m_hat = m;
  res.tail_bound = std::ldexp(norm0, -k_trunc);
  std::vector<ConvexBody> cells(f.cells());
  parallel_for(static_cast<std::size_t>(f.cells()), jobs, [&](std::size_t cell) {
    std::vector<ConvexBody> terms;
    double coef = 1.0;
    for (const auto& it : iterates) {
      coef /= 2.0 * m;
      if (!it.at(cell).is_zero()) terms.push_back(it.at(cell).scaled(coef));
    }
    cells[cell] = terms.empty() ? f.at(cell) : minkowski_sum(f.at(cell), minkowski_sum(terms, iterate_cap));
  });
  res.field = ConvexField(f.grid(), f.n(), std::move(cells), f.cap());
  return res;
}

ConvexField random_convex_field(const DyadicGrid& grid, int n, int points, double zero_prob, CounterRng& rng) {
  std::vector<ConvexBody> cells;
  cells.reserve(grid.cell_count());
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    if (rng.uniform() < zero_prob) {
      cells.push_back(ConvexBody::zero(n));
      continue;
    }
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(points, 1))));
    const double scale = std::exp(1.5 * rng.normal());
    Mat pts(n, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) pts(i, j) = scale * rng.normal();
    cells.push_back(ConvexBody::from_points(pts));
  }
  return ConvexField(grid, n, std::move(cells));
}

VectorField random_vector_field(const DyadicGrid& grid, int n, CounterRng& rng) {
  Mat v(n, grid.cell_count());
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    const double scale = std::exp(1.5 * rng.normal());
    for (int i = 0; i < n; ++i) v(i, c) = scale * rng.normal();
  }
  return VectorField(grid, std::move(v));
}

}  // namespace mw
