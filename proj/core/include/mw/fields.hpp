#pragma once

#include "mw/convexgeom.hpp"
#include "mw/dyadic.hpp"
#include "mw/rng.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mw {

/// Piecewise constant map from grid cells to R^n (column c = cell c).
class VectorField {
 public:
  VectorField() = default;
  VectorField(DyadicGrid grid, Mat values);
  static VectorField constant(const DyadicGrid& grid, const Vec& u);
  static VectorField zero(const DyadicGrid& grid, int n);

  const DyadicGrid& grid() const { return grid_; }
  int n() const { return static_cast<int>(values_.rows()); }
  std::int64_t cells() const { return values_.cols(); }
  const Mat& values() const { return values_; }
  Vec at(std::int64_t cell) const { return values_.col(cell); }
  /// Plain average of the values over the cells of q.
  Vec average(const DyadicCube& q) const;

 private:
  DyadicGrid grid_;
  Mat values_;
};

/// Piecewise constant map from cells to bounded symmetric convex bodies.
/// Aumann averages are memoized per cube (shared between copies).
class ConvexField {
 public:
  ConvexField() = default;
  ConvexField(DyadicGrid grid, int n, std::vector<ConvexBody> cells, int cap = kVertexCap);
  static ConvexField constant(const DyadicGrid& grid, const ConvexBody& k);

  const DyadicGrid& grid() const { return grid_; }
  int n() const { return n_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(cells_.size()); }
  const ConvexBody& at(std::int64_t cell) const { return cells_[cell]; }
  const std::vector<ConvexBody>& bodies() const { return cells_; }
  int cap() const { return cap_; }

  /// Per-cell support values h_{F(c)}(d).
  std::vector<double> supports(const Vec& d) const;

 private:
  friend ConvexBody aumann_average(const ConvexField& f, const DyadicCube& q);
  struct Cache;
  DyadicGrid grid_;
  int n_ = 0;
  int cap_ = kVertexCap;
  std::vector<ConvexBody> cells_;
  std::shared_ptr<Cache> cache_;
};

/// Per-cell SPD matrices with cached inverses.
class MatrixWeight {
 public:
  MatrixWeight() = default;
  /// Throws InputError naming the first cell that is not SPD or whose
  /// condition number exceeds `cond_cap`.
  MatrixWeight(DyadicGrid grid, std::vector<Mat> values, double cond_cap = 1e12);

  const DyadicGrid& grid() const { return grid_; }
  int n() const { return n_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(w_.size()); }
  const Mat& at(std::int64_t cell) const { return w_[cell]; }
  const Mat& inverse_at(std::int64_t cell) const { return winv_[cell]; }
  MatrixWeight inverse() const;

 private:
  DyadicGrid grid_;
  int n_ = 0;
  std::vector<Mat> w_;
  std::vector<Mat> winv_;
};

struct CellVerdict {
  bool holds = true;
  std::optional<std::int64_t> cell;
  explicit operator bool() const { return holds; }
};

ConvexField kf(const VectorField& f);
/// g = h f with |h| <= 1 cellwise, up to tol.
CellVerdict dominates(const VectorField& f, const VectorField& g, double tol = 1e-9);
ConvexBody aumann_average(const ConvexField& f, const DyadicCube& q);
/// (1/|Q|) sum_{c ⊆ Q} |c| h_{F(c)}(d), the support of the Aumann average.
double average_support(const ConvexField& f, const DyadicCube& q, const Vec& d);
/// h(c) = sup_{u ∈ F(c)} |W(c) u|.
std::vector<double> sup_weighted_radius(const ConvexField& f, const MatrixWeight& w);

struct WeightSpec {
  enum class Kind { Constant, Power, Rotating, Random };
  Kind kind = Kind::Constant;
  int n = 1;
  Mat a;                    // Constant
  double exponent = 0.0;    // Power: W = diag(x_axis^a, 1, ..., 1)
  int axis = 1;             // 1-based
  double omega = 0.0;       // Rotating: R(omega x_1) diag(lambda) R^T
  Vec lambda;
  double spread = 1.0;      // Random: Q diag(exp(spread g)) Q^T per cell
  std::uint64_t seed = 0;
};

MatrixWeight make_weight(const WeightSpec& spec, const DyadicGrid& grid);

/// Field files: header `field d L n vector|body`, then one row (vector) or
/// one body block (body) per cell in Morton order. Weight files: header
/// `weight d L n`, then one row of n*n row-major entries per cell.
void write_vector_field(std::ostream& out, const VectorField& f);
void write_convex_field(std::ostream& out, const ConvexField& f);
void write_weight(std::ostream& out, const MatrixWeight& w);
VectorField read_vector_field(std::istream& in);
ConvexField read_convex_field(std::istream& in);
MatrixWeight read_weight(std::istream& in);

}  // namespace mw
