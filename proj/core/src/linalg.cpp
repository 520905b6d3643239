#include "mw/linalg.hpp"

#include <cmath>

namespace mw {

SpanBasis column_span(const Mat& points, double rel_tol) {
  const auto n = points.rows();
  SpanBasis out{Mat(n, 0), 0.0};
  if (points.cols() == 0 || n == 0) return out;
  Eigen::BDCSVD<Mat> svd(points, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();  // descending
  out.scale = sv(0);
  if (out.scale <= 0.0) return out;
  int r = 0;
  while (r < sv.size() && sv(r) > rel_tol * out.scale) ++r;
  out.basis = svd.matrixU().leftCols(r);
  return out;
}

Mat orthogonal_complement(const Mat& basis) {
  const auto n = basis.rows();
  const auto r = basis.cols();
  if (r == 0) return Mat::Identity(n, n);
  if (r >= n) return Mat(n, 0);
  Mat proj = Mat::Identity(n, n) - basis * basis.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(proj);
  return es.eigenvectors().rightCols(n - r);
}

Mat sym_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  Vec s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

Mat sym_inv_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  Vec s = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

bool is_spd(const Mat& a, double sym_tol, double min_eig) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  if (!a.allFinite()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= min_eig;
}

double dual_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Mat plane_rotation(int n, double angle) {
  Mat r = Mat::Identity(n, n);
  if (n < 2) return r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

}  // namespace mw
