#pragma once

#include "mw/convexgeom.hpp"

#include <iosfwd>

namespace mw {

/// `polytope n k` followed by k vertex rows, or `ellipsoid n` followed by
/// n matrix rows; 17 significant digits. Zero is `polytope n 0`.
void write_body(std::ostream& out, const ConvexBody& body);
ConvexBody read_body(std::istream& in);

}  // namespace mw
