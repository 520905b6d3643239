#pragma once

#include "mw/linalg.hpp"

namespace mw {

/// Smallest l1 norm of a coefficient vector c with V c = u.
///
/// V is r x k. Solved as a two-phase dense simplex on the split
/// c = a - b, a, b >= 0. Returns +inf when u is not in the column span of V.
/// For a symmetric polytope conv{±v_i} this is exactly its gauge at u.
double min_l1_representation(const Mat& v, const Vec& u);

}  // namespace mw
