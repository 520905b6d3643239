#include "mw/convexgeom.hpp"

#include "mw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mw {

double weighted_distance(const Vec& x, const ConvexBody& body, const Mat& a, double gap_tol) {
  const Vec t = a * x;
  if (body.is_zero()) return t.norm();
  if (body.gauge(x) <= 1.0) return 0.0;

  const Mat pts = a * body.boundary_points();
  const Eigen::Index k = pts.cols();
  Mat atoms(pts.rows(), 2 * k);
  atoms << pts, -pts;
  const Eigen::Index m = atoms.cols();
  const double scale = std::max(t.norm(), atoms.colwise().norm().maxCoeff());
  const double tol = gap_tol * scale * scale;

  Vec lambda = Vec::Zero(m);
  Eigen::Index start = 0;
  (atoms.colwise() - t).colwise().squaredNorm().minCoeff(&start);
  lambda(start) = 1.0;
  Vec y = atoms.col(start);

  for (int it = 0; it < 100000; ++it) {
    const Vec g = y - t;
    const Vec score = atoms.transpose() * g;
    Eigen::Index s = 0;
    score.minCoeff(&s);
    Eigen::Index away = -1;
    double worst = -kInf;
    for (Eigen::Index j = 0; j < m; ++j)
      if (lambda(j) > 0.0 && score(j) > worst) worst = score(j), away = j;
    const double yg = y.dot(g);
    const double gap = yg - score(s);
    if (gap <= tol) break;

    Vec d;
    double gmax;
    const bool toward = gap >= worst - yg || lambda(away) >= 1.0;
    if (toward) {
      d = atoms.col(s) - y;
      gmax = 1.0;
    } else {
      d = y - atoms.col(away);
      gmax = lambda(away) / (1.0 - lambda(away));
    }
    const double dd = d.squaredNorm();
    if (dd == 0.0) break;
    const double gamma = std::clamp(-g.dot(d) / dd, 0.0, gmax);
    if (gamma == 0.0) break;
    if (toward) {
      lambda *= (1.0 - gamma);
      lambda(s) += gamma;
    } else {
      lambda *= (1.0 + gamma);
      lambda(away) -= gamma;
      if (gamma >= gmax) lambda(away) = 0.0;
    }
    y += gamma * d;
  }
  return (y - t).norm();
}

double hausdorff(const ConvexBody& k, const ConvexBody& l, const std::optional<Mat>& a) {
  if (k.dim() != l.dim()) throw InputError("hausdorff: dimension mismatch");
  const Mat metric = a ? *a : Mat::Identity(k.dim(), k.dim());
  double worst = 0.0;
  auto sweep = [&](const ConvexBody& from, const ConvexBody& to) {
    const Mat pts = from.boundary_points();
    for (Eigen::Index j = 0; j < pts.cols(); ++j) worst = std::max(worst, weighted_distance(pts.col(j), to, metric));
  };
  sweep(k, l);
  sweep(l, k);
  return worst;
}

}  // namespace mw
