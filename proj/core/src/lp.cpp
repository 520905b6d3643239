#include "mw/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mw {
namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_(rows + 1, cols + 1) { t_.setZero(); }

  double& at(int i, int j) { return t_(i, j); }
  double at(int i, int j) const { return t_(i, j); }
  double& rhs(int i) { return t_(i, cols_); }
  double& obj(int j) { return t_(rows_, j); }

  void pivot(int pr, int pc) {
    const double piv = t_(pr, pc);
    t_.row(pr) /= piv;
    for (int i = 0; i <= rows_; ++i) {
      if (i == pr) continue;
      const double f = t_(i, pc);
      if (f != 0.0) t_.row(i) -= f * t_.row(pr);
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  Mat t_;
};

// Runs primal simplex on the current objective row. Columns with
// allowed[j] == false never enter. Returns false if unbounded.
bool run_simplex(Tableau& tab, std::vector<int>& basis, const std::vector<char>& allowed,
                 double eps) {
  const int m = tab.rows();
  const int ncols = tab.cols();
  const int max_iter = 50 * (m + ncols) + 1000;
  int degenerate_run = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const bool bland = degenerate_run > 2 * m + 10;
    int enter = -1;
    double best = -eps;
    for (int j = 0; j < ncols; ++j) {
      if (!allowed[j]) continue;
      const double d = tab.obj(j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double ratio = kInf;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, enter);
      if (a > eps) {
        const double r = tab.rhs(i) / a;
        if (r < ratio - 1e-15 || (std::abs(r - ratio) <= 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
          ratio = r;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;
    tab.pivot(leave, enter);
    basis[leave] = enter;
  }
  return true;
}

}  // namespace

double min_l1_representation(const Mat& v, const Vec& u) {
  const int r = static_cast<int>(v.rows());
  const int k = static_cast<int>(v.cols());
  if (u.size() != r) return kInf;
  if (u.norm() == 0.0) return 0.0;
  if (k == 0) return kInf;

  const double scale = std::max(v.cwiseAbs().maxCoeff(), u.cwiseAbs().maxCoeff());
  const double eps = 1e-11 * scale;
  const int ncols = 2 * k + r;
  Tableau tab(r, ncols);
  std::vector<int> basis(r);
  for (int i = 0; i < r; ++i) {
    const double sgn = u(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < k; ++j) {
      tab.at(i, j) = sgn * v(i, j);
      tab.at(i, k + j) = -sgn * v(i, j);
    }
    tab.at(i, 2 * k + i) = 1.0;
    tab.rhs(i) = sgn * u(i);
    basis[i] = 2 * k + i;
  }

  // Phase 1: minimize the sum of artificials.
  for (int j = 0; j <= ncols; ++j) {
    double s = 0.0;
    if (j < 2 * k || j == ncols)
      for (int i = 0; i < r; ++i) s += tab.at(i, j);
    tab.obj(j) = j < 2 * k ? -s : (j == ncols ? -s : 0.0);
  }
  std::vector<char> allowed(ncols, 1);
  run_simplex(tab, basis, allowed, eps);
  double infeasibility = 0.0;
  for (int i = 0; i < r; ++i)
    if (basis[i] >= 2 * k) infeasibility += tab.rhs(i);
  if (infeasibility > 1e-9 * std::max(1.0, u.cwiseAbs().maxCoeff())) return kInf;

  // Drive remaining artificials out of the basis.
  for (int i = 0; i < r; ++i) {
    if (basis[i] < 2 * k) continue;
    int col = -1;
    double best = eps;
    for (int j = 0; j < 2 * k; ++j)
      if (std::abs(tab.at(i, j)) > best) {
        best = std::abs(tab.at(i, j));
        col = j;
      }
    if (col >= 0) {
      tab.pivot(i, col);
      basis[i] = col;
    }
  }

  // Phase 2: minimize sum of structurals, artificials barred.
  for (int j = 2 * k; j < ncols; ++j) allowed[j] = 0;
  for (int j = 0; j <= ncols; ++j) {
    const double c = j < 2 * k ? 1.0 : 0.0;
    double s = 0.0;
    for (int i = 0; i < r; ++i) {
      const double cb = basis[i] < 2 * k ? 1.0 : 0.0;
      s += cb * tab.at(i, j);
    }
    tab.obj(j) = (j == ncols) ? -s : c - s;
  }
  if (!run_simplex(tab, basis, allowed, eps)) return kInf;
  double value = 0.0;
  for (int i = 0; i < r; ++i)
    if (basis[i] < 2 * k) value += tab.rhs(i);
  return value;
}

}  // namespace mw
