#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace mw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Orthonormal basis of the column span of a point matrix.
struct SpanBasis {
  Mat basis;      // n x r, orthonormal columns
  double scale;   // largest singular value of the input
  int rank() const { return static_cast<int>(basis.cols()); }
};

/// Rank-revealing span of the columns of `points` (n x k). Singular values
/// below `rel_tol * sigma_max` are treated as zero.
SpanBasis column_span(const Mat& points, double rel_tol = 1e-10);

/// Orthonormal completion of `basis` (n x r) to an n x (n-r) complement.
Mat orthogonal_complement(const Mat& basis);

/// Symmetric square root of a symmetric positive semidefinite matrix.
Mat sym_sqrt(const Mat& a);
/// Inverse symmetric square root of an SPD matrix.
Mat sym_inv_sqrt(const Mat& a);
/// Largest singular value.
double spectral_norm(const Mat& a);

/// Symmetric to `sym_tol` (relative) and smallest eigenvalue >= `min_eig`.
bool is_spd(const Mat& a, double sym_tol = 1e-12, double min_eig = 1e-10);

/// Dual exponent with 1' = inf and inf' = 1.
double dual_exponent(double p);

/// Plane rotation by `angle` in the (e1, e2) plane of R^n.
Mat plane_rotation(int n, double angle);

}  // namespace mw
