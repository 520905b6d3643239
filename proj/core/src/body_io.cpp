#include "mw/body_io.hpp"

#include "mw/errors.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

namespace mw {

void write_body(std::ostream& out, const ConvexBody& body) {
  const int n = body.dim();
  out << std::setprecision(17);
  if (body.kind() == BodyKind::Ellipsoid) {
    out << "ellipsoid " << n << '\n';
    const Mat& a = body.shape();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out << (j ? " " : "") << a(i, j);
      out << '\n';
    }
    return;
  }
  const Mat v = body.boundary_points();
  out << "polytope " << n << ' ' << v.cols() << '\n';
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (int i = 0; i < n; ++i) out << (i ? " " : "") << v(i, c);
    out << '\n';
  }
}

ConvexBody read_body(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || n < 1) throw InputError("read_body: bad header");
  if (tag == "ellipsoid") {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(in >> a(i, j))) throw InputError("read_body: truncated matrix");
    return ConvexBody::ellipsoid(a);
  }
  if (tag != "polytope") throw InputError("read_body: unknown body kind '" + tag + "'");
  long k = 0;
  if (!(in >> k) || k < 0) throw InputError("read_body: bad vertex count");
  if (k == 0) return ConvexBody::zero(n);
  Mat v(n, k);
  for (long c = 0; c < k; ++c)
    for (int i = 0; i < n; ++i)
      if (!(in >> v(i, c))) throw InputError("read_body: truncated vertex list");
  return ConvexBody::from_points(v);
}

}  // namespace mw
