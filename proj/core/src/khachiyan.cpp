#include "mw/convexgeom.hpp"

#include <algorithm>
#include <cmath>

namespace mw {
namespace {

struct Khachiyan {
  Vec weights;
  Mat m;
  double max_kappa = 0.0;
  int iterations = 0;
  bool converged = false;
};

Vec kappas(const Mat& x, const Mat& minv) { return (x.array() * (minv * x).array()).colwise().sum().transpose(); }

Mat moment(const Mat& x, const Vec& u) { return x * u.asDiagonal() * x.transpose(); }

// Minimum-volume centered ellipsoid of ±x_i (x is r x k, full row rank),
// Khachiyan coordinate ascent with Todd-Yildirim away steps.
Khachiyan run_khachiyan(const Mat& x, double eps, int max_iter) {
  const int r = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  Khachiyan out;
  Vec u = Vec::Constant(k, 1.0 / k);
  Mat minv = moment(x, u).ldlt().solve(Mat::Identity(r, r));
  Vec kap = kappas(x, minv);
  const double target = r * (1.0 + eps);

  int it = 0;
  for (; it < max_iter; ++it) {
    if (it % 512 == 511) {
      minv = moment(x, u).ldlt().solve(Mat::Identity(r, r));
      kap = kappas(x, minv);
    }
    Eigen::Index up = 0;
    const double kmax = kap.maxCoeff(&up);
    if (kmax <= target) {
      minv = moment(x, u).ldlt().solve(Mat::Identity(r, r));
      kap = kappas(x, minv);
      if (kap.maxCoeff() <= target) {
        out.converged = true;
        break;
      }
      continue;
    }
    int down = -1;
    double kmin = kInf;
    for (int i = 0; i < k; ++i)
      if (u(i) > 0.0 && kap(i) < kmin) kmin = kap(i), down = i;

    int idx = static_cast<int>(up);
    double beta = (kmax - r) / (r * (kmax - 1.0));
    if (down >= 0 && u(down) < 1.0 && r - kmin > kmax - r) {
      idx = down;
      const double lower = -u(down) / (1.0 - u(down));
      beta = kmin > 1.0 ? std::max((kmin - r) / (r * (kmin - 1.0)), lower) : lower;
    }
    const double c = beta / (1.0 - beta);
    const double denom = 1.0 + c * kap(idx);
    if (denom <= 1e-12) {
      // Dropping the point would make M singular; take half the step.
      beta *= 0.5;
    }
    const double cc = beta / (1.0 - beta);
    const double dd = 1.0 + cc * kap(idx);
    const Vec g = minv * x.col(idx);
    const Vec h = x.transpose() * g;
    minv = (minv - (cc / dd) * g * g.transpose()) / (1.0 - beta);
    kap = (kap - (cc / dd) * h.cwiseAbs2()) / (1.0 - beta);
    u *= (1.0 - beta);
    u(idx) += beta;
    if (u(idx) < 1e-300) u(idx) = 0.0;
  }
  out.weights = u;
  out.m = moment(x, u);
  minv = out.m.ldlt().solve(Mat::Identity(r, r));
  out.max_kappa = kappas(x, minv).maxCoeff();
  out.iterations = it;
  out.converged = out.converged || out.max_kappa <= target;
  return out;
}

}  // namespace

EllipsoidFit loewner_fit(const ConvexBody& k, double eps) {
  const int n = k.dim();
  EllipsoidFit fit;
  if (k.is_zero()) {
    fit.outer = Mat::Zero(n, n);
    fit.inner = Mat::Zero(n, n);
    return fit;
  }
  if (k.kind() == BodyKind::Ellipsoid) {
    fit.outer = k.shape();
    fit.inner = k.shape() / std::sqrt(static_cast<double>(n));
    fit.rank = n;
    return fit;
  }
  const Mat& basis = k.span();
  const Mat x = basis.transpose() * k.vertices();
  fit.rank = k.rank();
  if (fit.rank == 1) {
    const double len = x.cwiseAbs().maxCoeff();
    fit.outer = len * basis * basis.transpose();
    fit.inner = fit.outer;
    return fit;
  }
  const Khachiyan kh = run_khachiyan(x, eps, 100000);
  const Mat root = basis * sym_sqrt(kh.m) * basis.transpose();
  fit.inner = root;
  fit.outer = std::sqrt(kh.max_kappa) * root;
  fit.iterations = kh.iterations;
  fit.converged = kh.converged;
  return fit;
}

Mat loewner_ellipsoid(const ConvexBody& k, double eps) { return loewner_fit(k, eps).outer; }

Mat JohnPair::inscribed() const { return basis * semiaxes.asDiagonal() * basis.transpose(); }

namespace {

void canonical_sign(Vec& e) {
  for (Eigen::Index i = 0; i < e.size(); ++i)
    if (std::abs(e(i)) > 1e-12) {
      if (e(i) < 0.0) e = -e;
      return;
    }
}

bool axis_before(double sa, const Vec& ea, double sb, const Vec& eb) {
  const double scale = std::max({sa, sb, 1e-300});
  if (std::abs(sa - sb) > 1e-9 * scale) return sa > sb;
  for (Eigen::Index i = 0; i < ea.size(); ++i)
    if (std::abs(ea(i) - eb(i)) > 1e-12) return ea(i) < eb(i);
  return false;
}

}  // namespace

JohnPair john_basis(const ConvexBody& k, double eps) {
  const int n = k.dim();
  JohnPair jp;
  jp.inner_factor = 1.0 / std::sqrt(static_cast<double>(n));
  const EllipsoidFit fit = loewner_fit(k, eps);
  jp.rank = fit.rank;

  std::vector<double> s;
  std::vector<Vec> e;
  if (fit.rank == n) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (fit.inner + fit.inner.transpose()));
    for (int i = 0; i < n; ++i) {
      s.push_back(std::max(0.0, es.eigenvalues()(i)));
      e.push_back(es.eigenvectors().col(i));
    }
  } else if (fit.rank > 0) {
    const Mat& basis = k.span();
    const Mat local = basis.transpose() * fit.inner * basis;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (local + local.transpose()));
    for (int i = 0; i < fit.rank; ++i) {
      s.push_back(std::max(0.0, es.eigenvalues()(i)));
      e.push_back(basis * es.eigenvectors().col(i));
    }
    const Mat comp = orthogonal_complement(basis);
    for (Eigen::Index i = 0; i < comp.cols(); ++i) {
      s.push_back(0.0);
      e.push_back(comp.col(i));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      s.push_back(0.0);
      e.push_back(Vec::Unit(n, i));
    }
  }
  for (auto& v : e) canonical_sign(v);
  // insertion sort keeps the order well defined for near ties
  for (int i = 1; i < n; ++i)
    for (int j = i; j > 0 && axis_before(s[j], e[j], s[j - 1], e[j - 1]); --j) {
      std::swap(s[j], s[j - 1]);
      std::swap(e[j], e[j - 1]);
    }
  jp.basis.resize(n, n);
  jp.semiaxes.resize(n);
  for (int i = 0; i < n; ++i) {
    jp.basis.col(i) = e[i];
    jp.semiaxes(i) = s[i];
  }
  return jp;
}

}  // namespace mw
