#pragma once

#include "mw/linalg.hpp"

#include <vector>

namespace mw {

/// Facet description of a symmetric polytope conv{±p_i} in R^r, r <= 3.
struct SymmetricHull {
  std::vector<int> extreme;  // indices i whose ±p_i are vertices, ascending
  Mat normals;               // r x m unit outward normals
  Vec offsets;               // m positive offsets: a_f . x <= b_f
};

/// Hull of the columns of `pts` (r x k, r in {1,2,3}) and their negations.
/// The columns must span R^r. Points within `rel_tol * max|p|` of the hull
/// of the others are dropped.
SymmetricHull symmetric_hull(const Mat& pts, double rel_tol = 1e-12);

}  // namespace mw
