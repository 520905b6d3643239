#include "mw/spaces.hpp"

#include "mw/errors.hpp"

#include <cmath>

namespace mw {
namespace {

void require_same(const DyadicGrid& a, const DyadicGrid& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": grids differ");
}

double power_sum_root(double sum, double p) { return std::pow(sum, 1.0 / p); }

}  // namespace

double scalar_norm(const std::vector<double>& h, double p, const DyadicGrid& grid) {
  return scalar_norm(h, p, grid, unit_cube(grid.d()));
}

double scalar_norm(const std::vector<double>& h, double p, const DyadicGrid& grid, const DyadicCube& q) {
  const std::int64_t first = grid.first_cell(q);
  const std::int64_t span = grid.cell_span(q);
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::int64_t c = first; c < first + span; ++c) m = std::max(m, std::abs(h[c]));
    return m;
  }
  double s = 0.0;
  for (std::int64_t c = first; c < first + span; ++c) s += std::pow(std::abs(h[c]), p);
  return power_sum_root(s * grid.cell_measure(), p);
}

double lp_norm(const VectorField& f, const LpWSpace& s) {
  require_same(f.grid(), s.grid(), "lp_norm");
  std::vector<double> h(f.cells());
  for (std::int64_t c = 0; c < f.cells(); ++c) h[c] = (s.w.at(c) * f.values().col(c)).norm();
  return scalar_norm(h, s.p, f.grid());
}

double body_norm(const ConvexField& f, const LpWSpace& s) {
  require_same(f.grid(), s.grid(), "body_norm");
  return scalar_norm(sup_weighted_radius(f, s.w), s.p, f.grid());
}

VectorField maximizing_selection(const ConvexField& f, const LpWSpace& s) {
  Mat sel = Mat::Zero(f.n(), f.cells());
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    const Mat pts = f.at(c).boundary_points();
    if (pts.cols() == 0) continue;
    Eigen::Index best = 0;
    (s.w.at(c) * pts).colwise().norm().maxCoeff(&best);
    sel.col(c) = pts.col(best);
  }
  return VectorField(f.grid(), std::move(sel));
}

double weak_body_norm(const ConvexField& f, const LpWSpace& s, const std::vector<Vec>& candidates) {
  if (candidates.empty()) throw InputError("weak_body_norm: no candidates");
  require_same(f.grid(), s.grid(), "weak_body_norm");
  double best = 0.0;
  std::vector<double> h(f.cells());
  for (const Vec& u : candidates) {
    if (u.norm() == 0.0) continue;
    for (std::int64_t c = 0; c < f.cells(); ++c)
      h[c] = f.at(c).gauge(u) <= 1.0 + 1e-9 ? (s.w.at(c) * u).norm() : 0.0;
    best = std::max(best, scalar_norm(h, s.p, f.grid()));
  }
  return best;
}

double pairing(const VectorField& f, const VectorField& g) {
  require_same(f.grid(), g.grid(), "pairing");
  if (f.n() != g.n()) throw InputError("pairing: dimension mismatch");
  double s = 0.0;
  for (std::int64_t c = 0; c < f.cells(); ++c) s += std::abs(f.values().col(c).dot(g.values().col(c)));
  return s * f.grid().cell_measure();
}

VectorField holder_extremizer(const VectorField& f, const LpWSpace& s) {
  if (s.p < 1.0) throw InputError("holder_extremizer: needs p >= 1");
  const double norm = lp_norm(f, s);
  if (norm == 0.0) throw InputError("holder_extremizer: f is zero");
  Mat g = Mat::Zero(f.n(), f.cells());
  if (std::isinf(s.p)) {
    std::int64_t best = 0;
    for (std::int64_t c = 0; c < f.cells(); ++c)
      if ((s.w.at(c) * f.values().col(c)).norm() == norm) {
        best = c;
        break;
      }
    const Vec wf = s.w.at(best) * f.values().col(best);
    g.col(best) = s.w.at(best) * wf / (norm * f.grid().cell_measure());
    return VectorField(f.grid(), std::move(g));
  }
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    const Vec wf = s.w.at(c) * f.values().col(c);
    const double len = wf.norm();
    g.col(c) = len == 0.0 ? Vec::Zero(f.n()) : Vec(s.w.at(c) * wf * std::pow(len, s.p - 2.0));
  }
  return VectorField(f.grid(), g / std::pow(norm, s.p - 1.0));
}

double indicator_norm(const LpWSpace& s, const DyadicCube& e, const Vec& u) {
  const DyadicGrid& grid = s.grid();
  const std::int64_t first = grid.first_cell(e);
  const std::int64_t span = grid.cell_span(e);
  std::vector<double> h(grid.cell_count(), 0.0);
  for (std::int64_t c = first; c < first + span; ++c) h[c] = (s.w.at(c) * u).norm();
  return scalar_norm(h, s.p, grid, e);
}

bool weight_constant_on(const MatrixWeight& w, const DyadicCube& e) {
  const std::int64_t first = w.grid().first_cell(e);
  const std::int64_t span = w.grid().cell_span(e);
  const Mat& w0 = w.at(first);
  for (std::int64_t c = first + 1; c < first + span; ++c)
    if (!(w.at(c).array() == w0.array()).all()) return false;
  return true;
}

namespace {

// ‖1_E u‖ = |B u| exactly, or nullopt when the norm is not Euclidean.
std::optional<Mat> euclidean_form(const LpWSpace& s, const DyadicCube& e) {
  const DyadicGrid& grid = s.grid();
  const std::int64_t first = grid.first_cell(e);
  const std::int64_t span = grid.cell_span(e);
  const double measure = e.measure();
  if (weight_constant_on(s.w, e)) {
    const double scale = std::isinf(s.p) ? 1.0 : std::pow(measure, 1.0 / s.p);
    return Mat(scale * s.w.at(first));
  }
  if (s.p == 2.0 || s.n() == 1) {
    if (s.n() == 1) {
      std::vector<double> h(grid.cell_count(), 0.0);
      for (std::int64_t c = first; c < first + span; ++c) h[c] = s.w.at(c)(0, 0);
      return Mat::Constant(1, 1, scalar_norm(h, s.p, grid, e));
    }
    Mat m = Mat::Zero(s.n(), s.n());
    for (std::int64_t c = first; c < first + span; ++c) m += s.w.at(c) * s.w.at(c);
    return sym_sqrt(m * grid.cell_measure());
  }
  return std::nullopt;
}

}  // namespace

ConvexBody indicator_norm_ball(const LpWSpace& s, const DyadicCube& e) {
  if (auto b = euclidean_form(s, e)) return ConvexBody::ellipsoid(b->inverse());
  const Mat& grid = direction_grid(s.n());
  const Eigen::Index half = grid.cols() / 2;
  Mat pts(s.n(), half);
  for (Eigen::Index j = 0; j < half; ++j) pts.col(j) = grid.col(j) / indicator_norm(s, e, grid.col(j));
  return ConvexBody::from_points(pts);
}

ReducingMatrix reducing_matrix_of_norm(int n, const std::function<double(const Vec&)>& norm, double eps) {
  const Mat& grid = direction_grid(n);
  const Eigen::Index half = grid.cols() / 2;
  Mat pts(n, half);
  for (Eigen::Index j = 0; j < half; ++j) {
    const double v = norm(grid.col(j));
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("reducing_matrix: not a norm on the direction grid");
    pts.col(j) = grid.col(j) / v;
  }
  const ConvexBody ball = ConvexBody::from_points(pts);
  if (ball.rank() < n) throw InputError("reducing_matrix: unit ball is degenerate");
  const EllipsoidFit fit = loewner_fit(ball, eps);
  ReducingMatrix r;
  r.a = fit.outer.inverse();
  r.a = 0.5 * (r.a + r.a.transpose());
  r.sandwich = spectral_norm(fit.inner.inverse() * fit.outer);
  r.exact = false;
  return r;
}

ReducingMatrix reducing_matrix(const LpWSpace& s, const DyadicCube& e, double eps) {
  if (auto b = euclidean_form(s, e)) {
    ReducingMatrix r;
    r.cube = e;
    r.a = *b;
    return r;
  }
  ReducingMatrix r = reducing_matrix_of_norm(s.n(), [&](const Vec& u) { return indicator_norm(s, e, u); }, eps);
  r.cube = e;
  return r;
}

ConvexBody polar_body(const ConvexBody& k) {
  if (k.kind() == BodyKind::Ellipsoid) return ConvexBody::ellipsoid(k.shape().inverse());
  if (k.rank() < k.dim()) throw InputError("polar_body: body is not full-dimensional");
  const Mat& grid = direction_grid(k.dim());
  const Eigen::Index half = grid.cols() / 2;
  Mat pts(k.dim(), half);
  for (Eigen::Index j = 0; j < half; ++j) pts.col(j) = grid.col(j) / k.support(grid.col(j));
  return ConvexBody::from_points(pts);
}

NormFunction::NormFunction(DyadicGrid grid, int n, std::vector<ConvexBody> balls)
    : grid_(grid), n_(n), balls_(std::move(balls)) {
  if (static_cast<std::int64_t>(balls_.size()) != grid_.cell_count())
    throw InputError("NormFunction: one ball per cell required");
  duals_.reserve(balls_.size());
  for (const auto& b : balls_) {
    if (b.dim() != n_ || b.rank() < n_) throw InputError("NormFunction: balls must be full-dimensional");
    duals_.push_back(polar_body(b));
  }
}

NormFunction weight_norm_function(const MatrixWeight& w) {
  std::vector<ConvexBody> balls;
  balls.reserve(w.cells());
  for (std::int64_t c = 0; c < w.cells(); ++c) balls.push_back(ConvexBody::ellipsoid(w.inverse_at(c)));
  return NormFunction(w.grid(), w.n(), std::move(balls));
}

double rho_norm(const VectorField& f, const NormFunction& rho, double p) {
  require_same(f.grid(), rho.grid(), "rho_norm");
  std::vector<double> h(f.cells());
  for (std::int64_t c = 0; c < f.cells(); ++c) h[c] = rho.rho(c, f.values().col(c));
  return scalar_norm(h, p, f.grid());
}

double rho_star_norm(const VectorField& g, const NormFunction& rho, double p) {
  require_same(g.grid(), rho.grid(), "rho_star_norm");
  std::vector<double> h(g.cells());
  for (std::int64_t c = 0; c < g.cells(); ++c) h[c] = rho.rho_star(c, g.values().col(c));
  return scalar_norm(h, p, g.grid());
}

}  // namespace mw
