#pragma once

#include "mw/fields.hpp"

#include <functional>

namespace mw {

/// L^p_W over the grid: ‖f‖ = (sum_c |c| |W(c) f(c)|^p)^{1/p}, max for p = inf.
struct LpWSpace {
  double p = 2.0;
  MatrixWeight w;

  const DyadicGrid& grid() const { return w.grid(); }
  int n() const { return w.n(); }
  /// (p', W^{-1}).
  LpWSpace dual() const { return LpWSpace{dual_exponent(p), w.inverse()}; }
};

/// (sum_{c in cells} |c| h(c)^p)^{1/p} over all cells, or over the cells of q.
double scalar_norm(const std::vector<double>& h, double p, const DyadicGrid& grid);
double scalar_norm(const std::vector<double>& h, double p, const DyadicGrid& grid, const DyadicCube& q);

double lp_norm(const VectorField& f, const LpWSpace& s);
double body_norm(const ConvexField& f, const LpWSpace& s);
/// Per-cell vertex attaining sup_{u ∈ F(c)} |W(c) u| (the maximizing selection).
VectorField maximizing_selection(const ConvexField& f, const LpWSpace& s);
/// max over candidates u of ‖1_{x : u ∈ F(x)} u‖; a lower bound of the weak norm.
double weak_body_norm(const ConvexField& f, const LpWSpace& s, const std::vector<Vec>& candidates);
double pairing(const VectorField& f, const VectorField& g);
/// g with pairing(f, g) = ‖f‖ and ‖g‖ in the dual space equal to 1.
VectorField holder_extremizer(const VectorField& f, const LpWSpace& s);

/// u -> ‖1_E u‖.
double indicator_norm(const LpWSpace& s, const DyadicCube& e, const Vec& u);
/// True when W is the same matrix on every cell of E.
bool weight_constant_on(const MatrixWeight& w, const DyadicCube& e);
/// Unit ball of u -> ‖1_E u‖: exact ellipsoid for p = 2 or W constant on E,
/// otherwise the hull of the boundary points d/‖1_E d‖ over the direction grid.
ConvexBody indicator_norm_ball(const LpWSpace& s, const DyadicCube& e);

/// |A u| <= N(u) <= sandwich·|A u|. The upper inequality always holds; the
/// lower one holds exactly when `exact` and otherwise on the direction grid.
struct ReducingMatrix {
  DyadicCube cube;
  Mat a;
  double sandwich = 1.0;
  bool exact = true;
};

ReducingMatrix reducing_matrix(const LpWSpace& s, const DyadicCube& e, double eps = 1e-6);
/// Reducing matrix of an arbitrary norm on R^n from its values on the grid.
ReducingMatrix reducing_matrix_of_norm(int n, const std::function<double(const Vec&)>& norm, double eps = 1e-6);

/// Polar body {v : h_K(v) <= 1}; exact for ellipsoids, grid hull otherwise.
ConvexBody polar_body(const ConvexBody& k);

/// Cellwise norms rho(x, u) = gauge of ball(x), rho*(x, v) = support of ball(x).
class NormFunction {
 public:
  NormFunction() = default;
  NormFunction(DyadicGrid grid, int n, std::vector<ConvexBody> balls);

  const DyadicGrid& grid() const { return grid_; }
  int n() const { return n_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(balls_.size()); }
  const ConvexBody& ball(std::int64_t cell) const { return balls_[cell]; }
  const ConvexBody& dual_ball(std::int64_t cell) const { return duals_[cell]; }
  double rho(std::int64_t cell, const Vec& u) const { return balls_[cell].gauge(u); }
  double rho_star(std::int64_t cell, const Vec& v) const { return balls_[cell].support(v); }

 private:
  DyadicGrid grid_;
  int n_ = 0;
  std::vector<ConvexBody> balls_;
  std::vector<ConvexBody> duals_;
};

/// rho_W(x, u) = |W(x) u|: ball(x) = W(x)^{-1}·B.
NormFunction weight_norm_function(const MatrixWeight& w);
double rho_norm(const VectorField& f, const NormFunction& rho, double p);
double rho_star_norm(const VectorField& g, const NormFunction& rho, double p);

}  // namespace mw
