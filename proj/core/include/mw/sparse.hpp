#pragma once

#include "mw/operators.hpp"

#include <iosfwd>

namespace mw {

struct StoppingNode {
  DyadicCube cube;
  JohnPair basis;
  Vec thresholds;             // 2n ⟨h_F(e_k)⟩_Q
  std::vector<int> children;  // indices into StoppingTree::nodes
  int parent = -1;
};

/// Stopping-time tree. Averages |⟨F·e_k⟩_Q| and ⟨|F·e_k|⟩_Q are both taken
/// as averaged support functions ⟨h_F(e_k)⟩_Q (equal for symmetric bodies).
struct StoppingTree {
  DyadicGrid grid;
  int n = 0;
  std::vector<int> roots;
  std::vector<StoppingNode> nodes;
  CubeCollection selected;
};

StoppingTree sparse_dominate(const ConvexField& f, const CubeCollection& fam, double eps = 1e-6);

struct DominationReport {
  bool holds = true;
  double constant = 0.0;         // 2 n^{5/2}
  double measured_factor = 0.0;  // max over cells of the smallest λ with LHS ⊆ λ RHS
  std::int64_t worst_cell = -1;
  bool sparse = true;
  bool packing = true;
  bool between = true;           // surviving cubes stay under the thresholds
  bool intermediate = true;      // ⟨F⟩_{Q'} ⊆ 2n^{5/2} ⟨F⟩_Q for surviving Q'
};

DominationReport verify_domination(const ConvexField& f, const CubeCollection& fam, const StoppingTree& tree,
                                   double tol = 1e-7, int jobs = 1);

/// Indented dump, one cube per line with its John semiaxes.
void write_tree(std::ostream& out, const StoppingTree& tree);

}  // namespace mw
