#pragma once

#include "mw/linalg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace mw {

enum class BodyKind { Zero, Polytope, Ellipsoid };

inline constexpr int kVertexCap = 4096;

/// Symmetric direction grid of R^n as columns (both d and -d present).
/// n=1: {±1}; n=2: 64 equally spaced angles; n=3: 97 Fibonacci points on
/// the upper hemisphere and their negations; n>=4: the n axes plus n^2
/// seeded Gaussian directions, and their negations.
const Mat& direction_grid(int n);

/// Roughly `count` well spread unit directions of R^n, one per ± pair.
Mat spread_directions(int n, int count);

/// Origin-symmetric convex body in R^n: Zero, a polytope conv{±v_i}, or an
/// ellipsoid {A u : |u| <= 1}. Values are immutable and cheap to copy.
class ConvexBody {
 public:
  ConvexBody();

  static ConvexBody zero(int n);
  /// Hull of the columns of `points` and their negations, pruned to extreme
  /// representatives. Above `cap` vertices an inner approximation keeping
  /// support points of a dense direction set is returned (exact() false).
  static ConvexBody from_points(const Mat& points, int cap = kVertexCap);
  static ConvexBody ellipsoid(const Mat& a);
  static ConvexBody segment(const Vec& u);
  static ConvexBody unit_ball(int n);

  BodyKind kind() const;
  int dim() const;
  int rank() const;
  bool is_zero() const { return kind() == BodyKind::Zero; }
  bool exact() const;
  int vertex_count() const;

  /// Polytope vertex representatives (n x k).
  const Mat& vertices() const;
  /// Ellipsoid matrix A.
  const Mat& shape() const;
  /// Orthonormal basis of the linear span (n x rank).
  const Mat& span() const;

  double support(const Vec& d) const;
  /// Minkowski functional; +inf off the span.
  double gauge(const Vec& u) const;
  /// Largest gauge over the columns of `points`.
  double max_gauge(const Mat& points) const;

  ConvexBody scaled(double t) const;
  /// Image under the linear map m (n' x n).
  ConvexBody mapped(const Mat& m) const;
  /// Polytope form; ellipsoids become the hull of A g over the direction grid.
  ConvexBody as_polytope() const;
  /// Points whose hull is the body (ellipsoids: grid images and principal axes).
  Mat boundary_points() const;

 private:
  struct Data;
  friend struct BodyBuilder;
  explicit ConvexBody(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

ConvexBody make_polytope(const std::vector<Vec>& points);

inline double support(const ConvexBody& k, const Vec& d) { return k.support(d); }
inline double gauge(const ConvexBody& k, const Vec& u) { return k.gauge(u); }

/// Smallest t with inner ⊆ t·outer (+inf if inner leaves the span of outer).
double inflation_factor(const ConvexBody& inner, const ConvexBody& outer);
/// inflation_factor <= 1 + tol, plus 1e-12 for rounding in the gauge evaluation.
bool contains_body(const ConvexBody& inner, const ConvexBody& outer, double tol = 1e-8);

ConvexBody minkowski_sum(const ConvexBody& k, const ConvexBody& l, int cap = kVertexCap);
/// Balanced pairwise sum of all bodies.
ConvexBody minkowski_sum(const std::vector<ConvexBody>& bodies, int cap = kVertexCap);
ConvexBody hull_union(const std::vector<ConvexBody>& bodies, int cap = kVertexCap);

/// Centered Löwner ellipsoid and the inscribed ellipsoid from the same
/// Khachiyan weights u: M = sum u_i x_i x_i^T, inner = M^{1/2},
/// outer = sqrt(max_i x_i^T M^+ x_i) M^{1/2}.
struct EllipsoidFit {
  Mat outer;   // K ⊆ outer·B
  Mat inner;   // inner·B ⊆ K
  int rank = 0;
  int iterations = 0;
  bool converged = true;
};

EllipsoidFit loewner_fit(const ConvexBody& k, double eps = 1e-6);
/// Löwner matrix A with K ⊆ A·B and (1/sqrt n) A·B ⊆ (1+eps) K.
Mat loewner_ellipsoid(const ConvexBody& k, double eps = 1e-6);

struct JohnPair {
  Mat basis;      // orthonormal columns e_k
  Vec semiaxes;   // nonincreasing
  double inner_factor = 1.0;
  int rank = 0;

  /// The inscribed ellipsoid sum u_k λ_k e_k, |u| <= 1, as a matrix.
  Mat inscribed() const;
};

JohnPair john_basis(const ConvexBody& k, double eps = 1e-6);

/// Hausdorff distance in the metric |A(x - y)|; A = identity by default.
double hausdorff(const ConvexBody& k, const ConvexBody& l, const std::optional<Mat>& a = std::nullopt);

/// Distance |A(x - y)| minimized over y in the body, by away-step Frank-Wolfe.
double weighted_distance(const Vec& x, const ConvexBody& body, const Mat& a, double gap_tol = 1e-8);

}  // namespace mw
