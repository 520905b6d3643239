#include "mw/sparse.hpp"

#include "mw/errors.hpp"
#include "mw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

namespace mw {
namespace {

constexpr double kFloor = 1e-12;

// Averaged supports along each basis vector over any cube inside `root`,
// from prefix sums over the root's contiguous Morton range.
class SupportAverages {
 public:
  SupportAverages(const ConvexField& f, const DyadicCube& root, const Mat& basis)
      : grid_(f.grid()), first_(grid_.first_cell(root)) {
    const std::int64_t span = grid_.cell_span(root);
    prefix_ = Mat::Zero(basis.cols(), span + 1);
    for (std::int64_t c = 0; c < span; ++c)
      for (Eigen::Index k = 0; k < basis.cols(); ++k)
        prefix_(k, c + 1) = prefix_(k, c) + f.at(first_ + c).support(basis.col(k));
  }

  Vec average(const DyadicCube& q) const {
    const std::int64_t a = grid_.first_cell(q) - first_;
    const std::int64_t span = grid_.cell_span(q);
    return (prefix_.col(a + span) - prefix_.col(a)) / static_cast<double>(span);
  }

 private:
  DyadicGrid grid_;
  std::int64_t first_;
  Mat prefix_;
};

double threshold_floor(const Vec& avg) { return kFloor * std::max(avg.maxCoeff(), 0.0); }

bool violates(const Vec& avg, const Vec& thresholds, double floor) {
  for (Eigen::Index k = 0; k < avg.size(); ++k)
    if (avg(k) > std::max(thresholds(k), floor)) return true;
  return false;
}

}  // namespace

StoppingTree sparse_dominate(const ConvexField& f, const CubeCollection& fam, double eps) {
  if (!(f.grid() == fam.grid())) throw InputError("sparse_dominate: grids differ");
  StoppingTree tree;
  tree.grid = f.grid();
  tree.n = f.n();
  std::deque<int> queue;
  for (const auto& q : fam.maximal()) {
    tree.roots.push_back(static_cast<int>(tree.nodes.size()));
    queue.push_back(static_cast<int>(tree.nodes.size()));
    tree.nodes.push_back(StoppingNode{q, {}, {}, {}, -1});
  }
  std::vector<DyadicCube> selected;
  while (!queue.empty()) {
    const int idx = queue.front();
    queue.pop_front();
    const DyadicCube q = tree.nodes[idx].cube;
    selected.push_back(q);
    JohnPair jp = john_basis(aumann_average(f, q), eps);
    const SupportAverages avg(f, q, jp.basis);
    const Vec own = avg.average(q);
    const Vec thresholds = 2.0 * f.n() * own;
    tree.nodes[idx].basis = std::move(jp);
    tree.nodes[idx].thresholds = thresholds;
    if (own.maxCoeff() <= 0.0) continue;
    const double floor = threshold_floor(own);

    std::vector<DyadicCube> kids;
    for (const auto& c : fam.cubes()) {
      if (c.level <= q.level || !q.contains(c)) continue;
      bool covered = false;
      for (const auto& k : kids)
        if (k.contains(c)) {
          covered = true;
          break;
        }
      if (covered) continue;
      if (violates(avg.average(c), thresholds, floor)) kids.push_back(c);
    }
    for (const auto& k : kids) {
      const int child = static_cast<int>(tree.nodes.size());
      tree.nodes[idx].children.push_back(child);
      tree.nodes.push_back(StoppingNode{k, {}, {}, {}, idx});
      queue.push_back(child);
    }
  }
  tree.selected = CubeCollection(f.grid(), std::move(selected));
  return tree;
}

DominationReport verify_domination(const ConvexField& f, const CubeCollection& fam, const StoppingTree& tree,
                                   double tol, int jobs) {
  DominationReport rep;
  const double n = f.n();
  rep.constant = 2.0 * std::pow(n, 2.5);
  rep.sparse = is_sparse(tree.selected).holds;

  const DyadicGrid& grid = f.grid();
  for (const auto& node : tree.nodes) {
    std::int64_t kids = 0;
    for (int c : node.children) kids += grid.cell_span(tree.nodes[c].cube);
    if (2 * kids > grid.cell_span(node.cube)) rep.packing = false;

    if (node.thresholds.size() == 0 || node.thresholds.maxCoeff() <= 0.0) continue;
    const ConvexBody outer = aumann_average(f, node.cube).scaled(rep.constant);
    const double floor = threshold_floor(node.thresholds / (2.0 * n));
    for (const auto& c : fam.cubes()) {
      if (c.level <= node.cube.level || !node.cube.contains(c)) continue;
      bool inside_child = false;
      for (int k : node.children)
        if (tree.nodes[k].cube.contains(c)) {
          inside_child = true;
          break;
        }
      if (inside_child) continue;
      Vec avg(node.basis.basis.cols());
      for (Eigen::Index k = 0; k < avg.size(); ++k) avg(k) = average_support(f, c, node.basis.basis.col(k));
      if (violates(avg, node.thresholds * (1.0 + 1e-12), floor)) rep.between = false;
      if (!contains_body(aumann_average(f, c), outer, tol)) rep.intermediate = false;
    }
  }

  const ConvexField lhs = maximal(f, fam, kVertexCap, jobs);
  const ConvexField rhs = maximal(f, tree.selected, kVertexCap, jobs);
  std::vector<double> factor(f.cells(), 0.0);
  parallel_for(static_cast<std::size_t>(f.cells()), jobs,
               [&](std::size_t c) { factor[c] = inflation_factor(lhs.at(c), rhs.at(c)); });
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    if (rep.worst_cell < 0 || factor[c] > rep.measured_factor) {
      rep.measured_factor = factor[c];
      rep.worst_cell = c;
    }
  }
  rep.holds = rep.sparse && rep.packing && rep.measured_factor <= rep.constant * (1.0 + tol);
  return rep;
}

void write_tree(std::ostream& out, const StoppingTree& tree) {
  auto emit = [&](auto&& self, int idx, int depth) -> void {
    const StoppingNode& node = tree.nodes[idx];
    out << std::string(2 * depth, ' ') << node.cube.level;
    for (auto c : node.cube.corner) out << ' ' << c;
    out << " :";
    for (Eigen::Index k = 0; k < node.basis.semiaxes.size(); ++k) out << ' ' << node.basis.semiaxes(k);
    out << '\n';
    for (int c : node.children) self(self, c, depth + 1);
  };
  const auto old = out.precision(17);
  for (int r : tree.roots) emit(emit, r, 0);
  out.precision(old);
}

}  // namespace mw
