#include "mw/fields.hpp"

#include "mw/body_io.hpp"
#include "mw/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <string>

namespace mw {

VectorField::VectorField(DyadicGrid grid, Mat values) : grid_(grid), values_(std::move(values)) {
  if (values_.cols() != grid_.cell_count()) throw InputError("VectorField: one column per cell required");
  if (!values_.allFinite()) throw InputError("VectorField: non-finite entries");
}

VectorField VectorField::constant(const DyadicGrid& grid, const Vec& u) {
  return VectorField(grid, u.replicate(1, grid.cell_count()));
}

VectorField VectorField::zero(const DyadicGrid& grid, int n) { return VectorField(grid, Mat::Zero(n, grid.cell_count())); }

Vec VectorField::average(const DyadicCube& q) const {
  const std::int64_t first = grid_.first_cell(q);
  const std::int64_t span = grid_.cell_span(q);
  return values_.middleCols(first, span).rowwise().mean();
}

struct ConvexField::Cache {
  std::mutex mutex;
  std::map<std::pair<int, std::int64_t>, ConvexBody> averages;
};

ConvexField::ConvexField(DyadicGrid grid, int n, std::vector<ConvexBody> cells, int cap)
    : grid_(grid), n_(n), cap_(cap), cells_(std::move(cells)), cache_(std::make_shared<Cache>()) {
  if (static_cast<std::int64_t>(cells_.size()) != grid_.cell_count())
    throw InputError("ConvexField: one body per cell required");
  for (const auto& b : cells_)
    if (b.dim() != n_) throw InputError("ConvexField: body dimension mismatch");
}

ConvexField ConvexField::constant(const DyadicGrid& grid, const ConvexBody& k) {
  return ConvexField(grid, k.dim(), std::vector<ConvexBody>(grid.cell_count(), k));
}

std::vector<double> ConvexField::supports(const Vec& d) const {
  std::vector<double> out(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) out[c] = cells_[c].support(d);
  return out;
}

MatrixWeight::MatrixWeight(DyadicGrid grid, std::vector<Mat> values, double cond_cap)
    : grid_(grid), w_(std::move(values)) {
  if (static_cast<std::int64_t>(w_.size()) != grid_.cell_count())
    throw InputError("MatrixWeight: one matrix per cell required");
  n_ = w_.empty() ? 0 : static_cast<int>(w_.front().rows());
  winv_.reserve(w_.size());
  for (std::size_t c = 0; c < w_.size(); ++c) {
    Mat& w = w_[c];
    if (w.rows() != n_ || w.cols() != n_ || !is_spd(w, 1e-12, 1e-10))
      throw InputError("MatrixWeight: matrix at cell " + std::to_string(c) + " is not SPD");
    w = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(w, Eigen::EigenvaluesOnly);
    const double cond = es.eigenvalues()(n_ - 1) / es.eigenvalues()(0);
    if (cond > cond_cap)
      throw InputError("MatrixWeight: condition number at cell " + std::to_string(c) + " exceeds the cap");
    Mat inv = w.inverse();
    winv_.push_back(0.5 * (inv + inv.transpose()));
  }
}

MatrixWeight MatrixWeight::inverse() const {
  MatrixWeight out = *this;
  std::swap(out.w_, out.winv_);
  return out;
}

ConvexField kf(const VectorField& f) {
  std::vector<ConvexBody> cells;
  cells.reserve(f.cells());
  for (std::int64_t c = 0; c < f.cells(); ++c) cells.push_back(ConvexBody::segment(f.at(c)));
  return ConvexField(f.grid(), f.n(), std::move(cells));
}

CellVerdict dominates(const VectorField& f, const VectorField& g, double tol) {
  if (!(f.grid() == g.grid()) || f.n() != g.n()) throw InputError("dominates: field shapes differ");
  double scale = 0.0;
  for (std::int64_t c = 0; c < f.cells(); ++c) scale = std::max(scale, f.at(c).norm());
  if (scale == 0.0) scale = 1.0;
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    const Vec fv = f.at(c);
    const Vec gv = g.at(c);
    const double nf = fv.norm();
    if (nf == 0.0) {
      if (gv.norm() > tol * scale) return CellVerdict{false, c};
      continue;
    }
    const double h = gv.dot(fv) / (nf * nf);
    const double off = (gv - h * fv).norm();
    if (off > tol * std::max(nf, gv.norm()) || std::abs(h) > 1.0 + tol) return CellVerdict{false, c};
  }
  return CellVerdict{};
}

ConvexBody aumann_average(const ConvexField& f, const DyadicCube& q) {
  const DyadicGrid& grid = f.grid();
  if (!grid.contains(q)) throw InputError("aumann_average: cube outside the grid");
  const std::int64_t first = grid.first_cell(q);
  if (q.level == grid.depth()) return f.cells_[first];
  const auto key = std::make_pair(q.level, first);
  {
    std::lock_guard lock(f.cache_->mutex);
    auto it = f.cache_->averages.find(key);
    if (it != f.cache_->averages.end()) return it->second;
  }
  std::vector<ConvexBody> parts;
  for (const auto& child : q.children()) parts.push_back(aumann_average(f, child));
  const ConvexBody avg = minkowski_sum(parts, f.cap()).scaled(std::ldexp(1.0, -grid.d()));
  std::lock_guard lock(f.cache_->mutex);
  return f.cache_->averages.emplace(key, avg).first->second;
}

double average_support(const ConvexField& f, const DyadicCube& q, const Vec& d) {
  const std::int64_t first = f.grid().first_cell(q);
  const std::int64_t span = f.grid().cell_span(q);
  double s = 0.0;
  for (std::int64_t c = first; c < first + span; ++c) s += f.at(c).support(d);
  return s / static_cast<double>(span);
}

std::vector<double> sup_weighted_radius(const ConvexField& f, const MatrixWeight& w) {
  if (!(f.grid() == w.grid()) || f.n() != w.n()) throw InputError("sup_weighted_radius: shapes differ");
  std::vector<double> h(f.cells(), 0.0);
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    const ConvexBody& b = f.at(c);
    switch (b.kind()) {
      case BodyKind::Zero:
        break;
      case BodyKind::Ellipsoid:
        h[c] = spectral_norm(w.at(c) * b.shape());
        break;
      case BodyKind::Polytope:
        h[c] = (w.at(c) * b.vertices()).colwise().norm().maxCoeff();
        break;
    }
  }
  return h;
}

MatrixWeight make_weight(const WeightSpec& spec, const DyadicGrid& grid) {
  const int n = spec.n;
  if (n < 1) throw InputError("make_weight: n must be positive");
  std::vector<Mat> values;
  values.reserve(grid.cell_count());
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    const Vec x = grid.cell_center(c);
    Mat w;
    switch (spec.kind) {
      case WeightSpec::Kind::Constant:
        if (spec.a.rows() != n || spec.a.cols() != n) throw InputError("make_weight: constant matrix has wrong size");
        w = spec.a;
        break;
      case WeightSpec::Kind::Power:
        if (spec.axis < 1 || spec.axis > grid.d()) throw InputError("make_weight: power axis outside 1..d");
        w = Mat::Identity(n, n);
        w(0, 0) = std::pow(x(spec.axis - 1), spec.exponent);
        break;
      case WeightSpec::Kind::Rotating: {
        if (spec.lambda.size() != n) throw InputError("make_weight: rotating weight needs n eigenvalues");
        const Mat r = plane_rotation(n, spec.omega * x(0));
        w = r * spec.lambda.asDiagonal() * r.transpose();
        break;
      }
      case WeightSpec::Kind::Random: {
        CounterRng rng = CounterRng(spec.seed).substream(static_cast<std::uint64_t>(c));
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        const Mat q = Eigen::HouseholderQR<Mat>(g).householderQ();
        Vec s(n);
        for (int i = 0; i < n; ++i) s(i) = std::exp(spec.spread * rng.normal());
        w = q * s.asDiagonal() * q.transpose();
        break;
      }
    }
    values.push_back(std::move(w));
  }
  return MatrixWeight(grid, std::move(values));
}

namespace {

void write_header(std::ostream& out, const char* tag, const DyadicGrid& g, int n) {
  out << tag << ' ' << g.d() << ' ' << g.depth() << ' ' << n;
}

DyadicGrid read_header(std::istream& in, const std::string& tag, int& n) {
  std::string word;
  int d = 0, depth = 0;
  if (!(in >> word >> d >> depth >> n) || word != tag || n < 1)
    throw InputError("expected a '" + tag + " d L n' header");
  return DyadicGrid(d, depth);
}

}  // namespace

void write_vector_field(std::ostream& out, const VectorField& f) {
  write_header(out, "field", f.grid(), f.n());
  out << " vector\n" << std::setprecision(17);
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    for (int i = 0; i < f.n(); ++i) out << (i ? " " : "") << f.values()(i, c);
    out << '\n';
  }
}

void write_convex_field(std::ostream& out, const ConvexField& f) {
  write_header(out, "field", f.grid(), f.n());
  out << " body\n";
  for (const auto& b : f.bodies()) write_body(out, b);
}

void write_weight(std::ostream& out, const MatrixWeight& w) {
  write_header(out, "weight", w.grid(), w.n());
  out << '\n' << std::setprecision(17);
  for (std::int64_t c = 0; c < w.cells(); ++c) {
    const Mat& m = w.at(c);
    for (int i = 0; i < w.n(); ++i)
      for (int j = 0; j < w.n(); ++j) out << (i + j ? " " : "") << m(i, j);
    out << '\n';
  }
}

VectorField read_vector_field(std::istream& in) {
  int n = 0;
  const DyadicGrid grid = read_header(in, "field", n);
  std::string kind;
  if (!(in >> kind) || kind != "vector") throw InputError("read_vector_field: not a vector field");
  Mat v(n, grid.cell_count());
  for (std::int64_t c = 0; c < grid.cell_count(); ++c)
    for (int i = 0; i < n; ++i)
      if (!(in >> v(i, c))) throw InputError("read_vector_field: truncated file");
  return VectorField(grid, std::move(v));
}

ConvexField read_convex_field(std::istream& in) {
  int n = 0;
  const DyadicGrid grid = read_header(in, "field", n);
  std::string kind;
  if (!(in >> kind) || kind != "body") throw InputError("read_convex_field: not a body field");
  std::vector<ConvexBody> cells;
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) cells.push_back(read_body(in));
  return ConvexField(grid, n, std::move(cells));
}

MatrixWeight read_weight(std::istream& in) {
  int n = 0;
  const DyadicGrid grid = read_header(in, "weight", n);
  std::vector<Mat> values;
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(in >> m(i, j))) throw InputError("read_weight: truncated file");
    values.push_back(std::move(m));
  }
  return MatrixWeight(grid, std::move(values));
}

}  // namespace mw
