#include "mw/convexgeom.hpp"

#include "mw/errors.hpp"
#include "mw/hull.hpp"
#include "mw/lp.hpp"
#include "mw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace mw {

struct ConvexBody::Data {
  BodyKind kind = BodyKind::Zero;
  int n = 0;
  int rank = 0;
  bool exact = true;
  Mat vertices;   // n x k
  Mat shape;      // ellipsoid A
  Mat shape_inv;
  Mat span;       // n x r
  Mat coords;     // r x k
  Mat normals;    // r x m, only for r <= 3
  Vec offsets;
};

namespace {

constexpr std::uint64_t kGridSeed = 0x5EED6D77C0FFEEULL;
constexpr long kSumBudgetLow = 2500000;
constexpr long kSumBudgetHigh = 2000;

Mat fibonacci_hemisphere(int count) {
  Mat d(3, count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = (i + 0.5) / count;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    d.col(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return d;
}

Mat gaussian_directions(int n, int count) {
  Mat d(n, count);
  CounterRng rng(kGridSeed + static_cast<std::uint64_t>(n));
  for (int j = 0; j < count; ++j) {
    if (j < n) {
      d.col(j) = Vec::Unit(n, j);
      continue;
    }
    Vec v(n);
    do {
      for (int i = 0; i < n; ++i) v(i) = rng.normal();
    } while (v.norm() < 1e-8);
    d.col(j) = v.normalized();
  }
  return d;
}

// For each column of dirs, index and sign of the column of pts maximizing |p.d|.
void argmax_abs(const Mat& pts, const Mat& dirs, std::vector<int>& idx, std::vector<double>& sgn) {
  const Eigen::Index k = pts.cols();
  const Eigen::Index m = dirs.cols();
  idx.assign(m, 0);
  sgn.assign(m, 1.0);
  std::vector<double> best(m, -1.0);
  constexpr Eigen::Index kBlock = 1024;
  for (Eigen::Index start = 0; start < k; start += kBlock) {
    const Eigen::Index len = std::min(kBlock, k - start);
    const Mat prod = pts.middleCols(start, len).transpose() * dirs;
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < len; ++i) {
        const double v = prod(i, j);
        if (std::abs(v) > best[j]) {
          best[j] = std::abs(v);
          idx[j] = static_cast<int>(start + i);
          sgn[j] = v < 0.0 ? -1.0 : 1.0;
        }
      }
  }
}

std::vector<int> cap_select(const Mat& coords, int cap) {
  const Mat dirs = spread_directions(static_cast<int>(coords.rows()), cap);
  std::vector<int> idx;
  std::vector<double> sgn;
  argmax_abs(coords, dirs, idx, sgn);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (static_cast<int>(idx.size()) > cap) idx.resize(cap);
  return idx;
}

std::vector<int> lp_prune(const Mat& coords) {
  const int k = static_cast<int>(coords.cols());
  std::vector<char> alive(k, 1);
  for (int i = 0; i < k; ++i) {
    Mat others(coords.rows(), k - 1);
    int m = 0;
    for (int j = 0; j < k; ++j)
      if (j != i && alive[j]) others.col(m++) = coords.col(j);
    if (m == 0) continue;
    if (min_l1_representation(others.leftCols(m), coords.col(i)) <= 1.0 + 1e-10) alive[i] = 0;
  }
  std::vector<int> keep;
  for (int i = 0; i < k; ++i)
    if (alive[i]) keep.push_back(i);
  return keep;
}

Mat select_cols(const Mat& m, const std::vector<int>& idx) {
  Mat out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = m.col(idx[j]);
  return out;
}

}  // namespace

const Mat& direction_grid(int n) {
  static std::mutex mutex;
  static std::map<int, Mat> cache;
  if (n < 1) throw InputError("direction_grid: dimension must be positive");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Mat half;
  if (n == 1) {
    half = Mat::Ones(1, 1);
  } else if (n == 2) {
    half = spread_directions(2, 32);
  } else if (n == 3) {
    half = fibonacci_hemisphere(97);
  } else {
    half = gaussian_directions(n, n * n + n);
  }
  Mat full(n, 2 * half.cols());
  full << half, -half;
  return cache.emplace(n, std::move(full)).first->second;
}

Mat spread_directions(int n, int count) {
  count = std::max(count, 1);
  if (n == 1) return Mat::Ones(1, 1);
  if (n == 2) {
    Mat d(2, count);
    for (int j = 0; j < count; ++j) {
      const double t = std::numbers::pi * j / count;
      d.col(j) << std::cos(t), std::sin(t);
    }
    return d;
  }
  if (n == 3) return fibonacci_hemisphere(count);
  return gaussian_directions(n, std::max(count, n));
}

ConvexBody::ConvexBody() : data_(std::make_shared<Data>()) {}

ConvexBody::ConvexBody(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

ConvexBody ConvexBody::zero(int n) {
  auto d = std::make_shared<Data>();
  d->n = n;
  d->span = Mat(n, 0);
  d->vertices = Mat(n, 0);
  d->coords = Mat(0, 0);
  return ConvexBody(std::move(d));
}

struct BodyBuilder {
  // `span_hint`, when given, is an orthonormal basis known to span the points.
  static ConvexBody polytope(const Mat& pts, int cap, bool exact, const SpanBasis* span_hint = nullptr);
};

ConvexBody ConvexBody::from_points(const Mat& points, int cap) {
  if (!points.allFinite()) throw InputError("from_points: non-finite coordinates");
  return BodyBuilder::polytope(points, cap, true);
}

ConvexBody BodyBuilder::polytope(const Mat& pts, int cap, bool exact, const SpanBasis* span_hint) {
  auto d = std::make_shared<ConvexBody::Data>();
  d->n = static_cast<int>(pts.rows());
  const SpanBasis sb = span_hint ? *span_hint : column_span(pts);
  if (sb.rank() == 0) {
    d->span = Mat(d->n, 0);
    d->vertices = Mat(d->n, 0);
    return ConvexBody(std::move(d));
  }
  const int r = sb.rank();
  Mat coords = sb.basis.transpose() * pts;
  std::vector<int> keep;
  {
    const double floor = 1e-14 * sb.scale;
    for (Eigen::Index j = 0; j < coords.cols(); ++j)
      if (coords.col(j).norm() > floor) keep.push_back(static_cast<int>(j));
  }
  Mat work = select_cols(coords, keep);
  Mat raw = select_cols(pts, keep);

  if (r <= 3) {
    SymmetricHull h = symmetric_hull(work);
    if (static_cast<int>(h.extreme.size()) > cap) {
      const Mat ext = select_cols(work, h.extreme);
      const Mat ext_raw = select_cols(raw, h.extreme);
      const std::vector<int> chosen = cap_select(ext, cap);
      work = select_cols(ext, chosen);
      raw = select_cols(ext_raw, chosen);
      h = symmetric_hull(work);
      exact = false;
    }
    d->coords = select_cols(work, h.extreme);
    d->vertices = select_cols(raw, h.extreme);
    d->normals = std::move(h.normals);
    d->offsets = std::move(h.offsets);
  } else {
    if (work.cols() > cap) {
      const std::vector<int> chosen = cap_select(work, cap);
      work = select_cols(work, chosen);
      raw = select_cols(raw, chosen);
      exact = false;
    }
    const std::vector<int> ext = lp_prune(work);
    d->coords = select_cols(work, ext);
    d->vertices = select_cols(raw, ext);
  }
  d->kind = BodyKind::Polytope;
  d->rank = r;
  d->exact = exact;
  d->span = sb.basis;
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::ellipsoid(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InputError("ellipsoid: matrix must be square");
  const Mat sym = 0.5 * (a + a.transpose());
  if (!is_spd(a, 1e-10, 1e-10)) throw InputError("ellipsoid: matrix is not symmetric positive definite");
  auto d = std::make_shared<Data>();
  d->kind = BodyKind::Ellipsoid;
  d->n = static_cast<int>(a.rows());
  d->rank = d->n;
  d->exact = true;
  d->shape = sym;
  d->shape_inv = sym.inverse();
  d->span = Mat::Identity(d->n, d->n);
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::segment(const Vec& u) {
  if (u.norm() == 0.0) return zero(static_cast<int>(u.size()));
  auto d = std::make_shared<Data>();
  d->kind = BodyKind::Polytope;
  d->n = static_cast<int>(u.size());
  d->rank = 1;
  d->vertices = u;
  d->span = u.normalized();
  d->coords = Mat::Constant(1, 1, u.norm());
  d->normals.resize(1, 2);
  d->normals << 1.0, -1.0;
  d->offsets = Vec::Constant(2, u.norm());
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::unit_ball(int n) { return ellipsoid(Mat::Identity(n, n)); }

BodyKind ConvexBody::kind() const { return data_->kind; }
int ConvexBody::dim() const { return data_->n; }
int ConvexBody::rank() const { return data_->rank; }
bool ConvexBody::exact() const { return data_->exact; }
int ConvexBody::vertex_count() const {
  return data_->kind == BodyKind::Polytope ? static_cast<int>(data_->vertices.cols()) : 0;
}

const Mat& ConvexBody::vertices() const {
  if (data_->kind == BodyKind::Ellipsoid) throw UnsupportedError("vertices: body is an ellipsoid");
  return data_->vertices;
}

const Mat& ConvexBody::shape() const {
  if (data_->kind != BodyKind::Ellipsoid) throw UnsupportedError("shape: body is not an ellipsoid");
  return data_->shape;
}

const Mat& ConvexBody::span() const { return data_->span; }

double ConvexBody::support(const Vec& d) const {
  switch (data_->kind) {
    case BodyKind::Zero:
      return 0.0;
    case BodyKind::Ellipsoid:
      return (data_->shape * d).norm();
    case BodyKind::Polytope:
      return (data_->vertices.transpose() * d).cwiseAbs().maxCoeff();
  }
  return 0.0;
}

double ConvexBody::gauge(const Vec& u) const {
  const double un = u.norm();
  if (un == 0.0) return 0.0;
  switch (data_->kind) {
    case BodyKind::Zero:
      return kInf;
    case BodyKind::Ellipsoid:
      return (data_->shape_inv * u).norm();
    case BodyKind::Polytope:
      break;
  }
  const Vec y = data_->span.transpose() * u;
  if ((u - data_->span * y).norm() > 1e-9 * un) return kInf;
  if (data_->rank <= 3) {
    const Vec ratio = (data_->normals.transpose() * y).cwiseQuotient(data_->offsets);
    return std::max(0.0, ratio.maxCoeff());
  }
  return min_l1_representation(data_->coords, y);
}

double ConvexBody::max_gauge(const Mat& points) const {
  if (points.cols() == 0) return 0.0;
  if (data_->kind != BodyKind::Polytope || data_->rank > 3) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) best = std::max(best, gauge(points.col(j)));
    return best;
  }
  const Mat y = data_->span.transpose() * points;
  const Mat res = points - data_->span * y;
  for (Eigen::Index j = 0; j < points.cols(); ++j)
    if (res.col(j).norm() > 1e-9 * points.col(j).norm()) return kInf;
  const Mat ratio = (data_->normals.transpose() * y).array().colwise() / data_->offsets.array();
  return std::max(0.0, ratio.maxCoeff());
}

ConvexBody ConvexBody::scaled(double t) const {
  t = std::abs(t);
  if (data_->kind == BodyKind::Zero) return *this;
  if (t == 0.0) return zero(data_->n);
  auto d = std::make_shared<Data>(*data_);
  d->vertices *= t;
  d->coords *= t;
  d->offsets *= t;
  d->shape *= t;
  d->shape_inv /= t;
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::mapped(const Mat& m) const {
  if (m.cols() != data_->n) throw InputError("mapped: dimension mismatch");
  const int out = static_cast<int>(m.rows());
  switch (data_->kind) {
    case BodyKind::Zero:
      return zero(out);
    case BodyKind::Polytope:
      return BodyBuilder::polytope(m * data_->vertices, kVertexCap, data_->exact);
    case BodyKind::Ellipsoid:
      break;
  }
  if (m.rows() == m.cols()) {
    const Mat b = m * data_->shape;
    Eigen::FullPivLU<Mat> lu(b);
    if (lu.isInvertible()) {
      const Mat a = sym_sqrt(b * b.transpose());
      if (is_spd(a, 1e-10, 1e-10)) return ellipsoid(a);
    }
  }
  return BodyBuilder::polytope(m * boundary_points(), kVertexCap, false);
}

ConvexBody ConvexBody::as_polytope() const {
  if (data_->kind != BodyKind::Ellipsoid) return *this;
  return BodyBuilder::polytope(boundary_points(), kVertexCap, false);
}

Mat ConvexBody::boundary_points() const {
  switch (data_->kind) {
    case BodyKind::Zero:
      return Mat(data_->n, 0);
    case BodyKind::Polytope:
      return data_->vertices;
    case BodyKind::Ellipsoid:
      break;
  }
  const Mat& grid = direction_grid(data_->n);
  const Eigen::Index half = grid.cols() / 2;
  Eigen::SelfAdjointEigenSolver<Mat> es(data_->shape);
  Mat pts(data_->n, half + data_->n);
  pts.leftCols(half) = data_->shape * grid.leftCols(half);
  pts.rightCols(data_->n) = es.eigenvectors() * es.eigenvalues().asDiagonal();
  return pts;
}

ConvexBody make_polytope(const std::vector<Vec>& points) {
  if (points.empty()) throw InputError("make_polytope: no points");
  const auto n = points.front().size();
  Mat m(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != n) throw InputError("make_polytope: dimension mismatch");
    m.col(j) = points[j];
  }
  return ConvexBody::from_points(m);
}

double inflation_factor(const ConvexBody& inner, const ConvexBody& outer) {
  if (inner.dim() != outer.dim()) throw InputError("inflation_factor: dimension mismatch");
  if (inner.is_zero()) return 0.0;
  if (outer.is_zero()) return kInf;
  return outer.max_gauge(inner.boundary_points());
}

bool contains_body(const ConvexBody& inner, const ConvexBody& outer, double tol) {
  return inflation_factor(inner, outer) <= 1.0 + tol + 1e-12;
}

namespace {

// Exact sum when the joint span is at most two-dimensional: one argmax pair
// per cone of the common refinement of both normal fans.
Mat planar_sum_points(const ConvexBody& k, const ConvexBody& l, const Mat& basis) {
  std::vector<double> angles;
  auto add_fan = [&](const ConvexBody& b) {
    const Mat c = basis.transpose() * b.vertices();
    if (b.rank() == 1 || c.cols() == 1) {
      const Eigen::Vector2d v = c.col(0);
      const double t = std::atan2(v.x(), -v.y());
      angles.push_back(t);
      angles.push_back(t + std::numbers::pi);
      return;
    }
    const SymmetricHull h = symmetric_hull(c);
    for (Eigen::Index j = 0; j < h.normals.cols(); ++j) angles.push_back(std::atan2(h.normals(1, j), h.normals(0, j)));
  };
  add_fan(k);
  add_fan(l);
  for (double& t : angles) {
    t = std::fmod(t, 2.0 * std::numbers::pi);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
  }
  std::sort(angles.begin(), angles.end());
  const Eigen::Index m = static_cast<Eigen::Index>(angles.size());
  Mat dirs(basis.rows(), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double a0 = angles[j];
    const double a1 = j + 1 < m ? angles[j + 1] : angles[0] + 2.0 * std::numbers::pi;
    const double mid = 0.5 * (a0 + a1);
    dirs.col(j) = basis * Eigen::Vector2d(std::cos(mid), std::sin(mid));
  }
  std::vector<int> ik, il;
  std::vector<double> sk, sl;
  argmax_abs(k.vertices(), dirs, ik, sk);
  argmax_abs(l.vertices(), dirs, il, sl);
  Mat pts(basis.rows(), m);
  for (Eigen::Index j = 0; j < m; ++j) pts.col(j) = sk[j] * k.vertices().col(ik[j]) + sl[j] * l.vertices().col(il[j]);
  return pts;
}

}  // namespace

ConvexBody minkowski_sum(const ConvexBody& k, const ConvexBody& l, int cap) {
  if (k.dim() != l.dim()) throw InputError("minkowski_sum: dimension mismatch");
  if (k.is_zero()) return l;
  if (l.is_zero()) return k;
  const ConvexBody a = k.as_polytope();
  const ConvexBody b = l.as_polytope();
  const bool exact = a.exact() && b.exact();
  const Mat& va = a.vertices();
  const Mat& vb = b.vertices();
  const int n = a.dim();

  Mat joint(n, va.cols() + vb.cols());
  joint << va, vb;
  const SpanBasis sb = column_span(joint);
  if (sb.rank() == 2) return BodyBuilder::polytope(planar_sum_points(a, b, sb.basis), cap, exact);

  const long cand = 2L * va.cols() * vb.cols();
  const long budget = sb.rank() <= 3 ? kSumBudgetLow : kSumBudgetHigh;
  if (cand <= budget) {
    Mat pts(n, cand);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < va.cols(); ++i)
      for (Eigen::Index j = 0; j < vb.cols(); ++j) {
        pts.col(c++) = va.col(i) + vb.col(j);
        pts.col(c++) = va.col(i) - vb.col(j);
      }
    return BodyBuilder::polytope(pts, cap, exact, &sb);
  }
  const Mat dirs = sb.basis * spread_directions(sb.rank(), cap);
  std::vector<int> ia, ib;
  std::vector<double> sa, sbv;
  argmax_abs(va, dirs, ia, sa);
  argmax_abs(vb, dirs, ib, sbv);
  Mat pts(n, dirs.cols());
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) pts.col(j) = sa[j] * va.col(ia[j]) + sbv[j] * vb.col(ib[j]);
  return BodyBuilder::polytope(pts, cap, false, &sb);
}

ConvexBody minkowski_sum(const std::vector<ConvexBody>& bodies, int cap) {
  if (bodies.empty()) throw InputError("minkowski_sum: empty list");
  std::vector<ConvexBody> level = bodies;
  while (level.size() > 1) {
    std::vector<ConvexBody> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(minkowski_sum(level[i], level[i + 1], cap));
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

ConvexBody hull_union(const std::vector<ConvexBody>& bodies, int cap) {
  if (bodies.empty()) throw InputError("hull_union: empty list");
  const int n = bodies.front().dim();
  bool exact = true;
  Eigen::Index total = 0;
  for (const auto& b : bodies) {
    if (b.dim() != n) throw InputError("hull_union: dimension mismatch");
    if (b.kind() == BodyKind::Ellipsoid) exact = false;
    exact = exact && b.exact();
    total += b.boundary_points().cols();
  }
  if (bodies.size() == 1) return bodies.front();
  if (total == 0) return ConvexBody::zero(n);
  Mat pts(n, total);
  Eigen::Index c = 0;
  for (const auto& b : bodies) {
    const Mat bp = b.boundary_points();
    pts.middleCols(c, bp.cols()) = bp;
    c += bp.cols();
  }
  return BodyBuilder::polytope(pts, cap, exact);
}

}  // namespace mw
