#include "mw/hull.hpp"

#include "mw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace mw {
namespace {

SymmetricHull hull_1d(const Mat& pts) {
  Eigen::Index best = 0;
  const double m = pts.row(0).cwiseAbs().maxCoeff(&best);
  SymmetricHull h;
  h.extreme = {static_cast<int>(best)};
  h.normals.resize(1, 2);
  h.normals << 1.0, -1.0;
  h.offsets = Vec::Constant(2, m);
  return h;
}

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

SymmetricHull hull_2d(const Mat& pts, double rel_tol) {
  const int k = static_cast<int>(pts.cols());
  const int total = 2 * k;
  auto point = [&](int i) -> Eigen::Vector2d {
    return i < k ? Eigen::Vector2d(pts.col(i)) : Eigen::Vector2d(-pts.col(i - k));
  };
  double scale = 0.0;
  for (int i = 0; i < k; ++i) scale = std::max(scale, pts.col(i).norm());
  const double eps = rel_tol * scale;
  // b is dropped when within eps of the line through o and a.
  auto turns_left = [&](int o, int a, int b) {
    const auto po = point(o), pa = point(a), pb = point(b);
    return cross2(po, pa, pb) > eps * (pb - po).norm();
  };

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto pa = point(a), pb = point(b);
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return a < b;
  });

  std::vector<int> chain(2 * total);
  int m = 0;
  for (int idx : order) {
    while (m >= 2 && !turns_left(chain[m - 2], chain[m - 1], idx)) --m;
    chain[m++] = idx;
  }
  const int lower = m + 1;
  for (int s = total - 2; s >= 0; --s) {
    const int idx = order[s];
    while (m >= lower && !turns_left(chain[m - 2], chain[m - 1], idx)) --m;
    chain[m++] = idx;
  }
  chain.resize(m - 1);  // last point repeats the first

  SymmetricHull h;
  const int nv = static_cast<int>(chain.size());
  h.normals.resize(2, nv);
  h.offsets.resize(nv);
  for (int e = 0; e < nv; ++e) {
    const Eigen::Vector2d a = point(chain[e]);
    const Eigen::Vector2d b = point(chain[(e + 1) % nv]);
    Eigen::Vector2d nrm(b.y() - a.y(), a.x() - b.x());
    nrm.normalize();
    h.normals.col(e) = nrm;
    h.offsets(e) = nrm.dot(a);
  }
  for (int idx : chain) h.extreme.push_back(idx < k ? idx : idx - k);
  std::sort(h.extreme.begin(), h.extreme.end());
  h.extreme.erase(std::unique(h.extreme.begin(), h.extreme.end()), h.extreme.end());
  return h;
}

// Exact sign of det[b - a, c - a, q - a]: a floating-point filter, then
// expansion arithmetic (error-free sums and products) when it is inconclusive.
void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

struct Expansion {
  std::vector<double> c;  // nonoverlapping, increasing magnitude

  void add(double b) {
    std::size_t m = 0;
    double q = b;
    for (double e : c) {
      double h = 0.0;
      two_sum(q, e, q, h);
      if (h != 0.0) c[m++] = h;
    }
    c.resize(m);
    if (q != 0.0) c.push_back(q);
  }
  int sign() const { return c.empty() ? 0 : (c.back() > 0.0 ? 1 : -1); }
};

int orient_exact(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                 const Eigen::Vector3d& q) {
  double d[3][3][2];
  const Eigen::Vector3d* rows[3] = {&b, &c, &q};
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 3; ++i) two_sum((*rows[r])(i), -a(i), d[r][i][0], d[r][i][1]);
  static const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  Expansion e;
  for (int s = 0; s < 6; ++s)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const double x = (s < 3 ? 1.0 : -1.0) * d[0][perm[s][0]][i];
          const double y = d[1][perm[s][1]][j];
          const double z = d[2][perm[s][2]][k];
          if (x == 0.0 || y == 0.0 || z == 0.0) continue;
          const double p = x * y;
          const double pe = std::fma(x, y, -p);
          const double p1 = p * z;
          e.add(std::fma(p, z, -p1));
          e.add(p1);
          const double p2 = pe * z;
          e.add(std::fma(pe, z, -p2));
          e.add(p2);
        }
  return e.sign();
}

int orient(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c, const Eigen::Vector3d& q) {
  const Eigen::Vector3d u = b - a, v = c - a, w = q - a;
  const double m0 = v.y() * w.z() - v.z() * w.y();
  const double m1 = v.z() * w.x() - v.x() * w.z();
  const double m2 = v.x() * w.y() - v.y() * w.x();
  const double det = u.x() * m0 + u.y() * m1 + u.z() * m2;
  const double perm = std::abs(u.x()) * (std::abs(v.y() * w.z()) + std::abs(v.z() * w.y())) +
                      std::abs(u.y()) * (std::abs(v.z() * w.x()) + std::abs(v.x() * w.z())) +
                      std::abs(u.z()) * (std::abs(v.x() * w.y()) + std::abs(v.y() * w.x()));
  const double bound = 1e-14 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return orient_exact(a, b, c, q);
}

struct Face {
  std::array<int, 3> v;
  Eigen::Vector3d n;
  double off;
  std::vector<int> outside;
  bool alive = true;
};

SymmetricHull hull_3d(const Mat& pts, double rel_tol) {
  const int k = static_cast<int>(pts.cols());
  const long total = 2L * k;
  Eigen::Matrix3Xd p(3, total);
  p.leftCols(k) = pts;
  p.rightCols(k) = -pts;
  auto neg = [&](int i) { return i < k ? i + k : i - k; };

  Eigen::Index i0 = 0;
  const double scale = p.colwise().norm().maxCoeff(&i0);
  const double eps = rel_tol * scale;
  const Eigen::Vector3d a = p.col(i0) / scale;

  int ib = -1;
  double best = 0.0;
  for (int i = 0; i < total; ++i) {
    const Eigen::Vector3d q = p.col(i);
    const double dist = (q - q.dot(a) * a).norm();
    if (dist > best) best = dist, ib = i;
  }
  if (ib < 0 || best <= eps) throw InputError("symmetric_hull: points do not span R^3");
  const Eigen::Vector3d plane = a.cross(Eigen::Vector3d(p.col(ib))).normalized();
  int ic = -1;
  best = 0.0;
  for (int i = 0; i < total; ++i) {
    const double dist = std::abs(plane.dot(p.col(i)));
    if (dist > best) best = dist, ic = i;
  }
  if (ic < 0 || best <= eps) throw InputError("symmetric_hull: points do not span R^3");

  const std::array<int, 4> tet = {static_cast<int>(i0), neg(static_cast<int>(i0)), ib, ic};
  const Eigen::Vector3d centre = (p.col(ib) + p.col(ic)) / 4.0;

  std::vector<Face> faces;
  std::unordered_map<long, int> edge_owner;
  auto above = [&](const Face& f, const Eigen::Vector3d& q) {
    return orient(p.col(f.v[0]), p.col(f.v[1]), p.col(f.v[2]), q) > 0;
  };
  auto key = [&](int u, int v) { return static_cast<long>(u) * total + v; };

  auto add_face = [&](int u, int v, int w, const Eigen::Vector3d& fallback) {
    Face f;
    f.v = {u, v, w};
    const Eigen::Vector3d pu = p.col(u), pv = p.col(v), pw = p.col(w);
    Eigen::Vector3d nrm = (pv - pu).cross(pw - pu);
    const double len = nrm.norm();
    f.n = len > 0.0 ? Eigen::Vector3d(nrm / len) : fallback;
    f.off = f.n.dot(pu);
    faces.push_back(std::move(f));
    const int id = static_cast<int>(faces.size()) - 1;
    edge_owner[key(u, v)] = id;
    edge_owner[key(v, w)] = id;
    edge_owner[key(w, u)] = id;
    return id;
  };

  const int combos[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (auto& c : combos) {
    int u = tet[c[0]], v = tet[c[1]], w = tet[c[2]];
    const Eigen::Vector3d pu = p.col(u), pv = p.col(v), pw = p.col(w);
    if ((pv - pu).cross(pw - pu).dot(pu - centre) < 0.0) std::swap(v, w);
    add_face(u, v, w, Eigen::Vector3d::Zero());
  }

  std::vector<char> in_tet(total, 0);
  for (int t : tet) in_tet[t] = 1;
  for (int i = 0; i < total; ++i) {
    if (in_tet[i]) continue;
    for (int f = 0; f < 4; ++f)
      if (faces[f].n.dot(p.col(i)) - faces[f].off > eps) {
        faces[f].outside.push_back(i);
        break;
      }
  }

  std::vector<int> pending = {0, 1, 2, 3};
  std::vector<int> visible, stack, new_faces;
  std::vector<char> is_visible;
  while (!pending.empty()) {
    const int fid = pending.back();
    pending.pop_back();
    if (!faces[fid].alive || faces[fid].outside.empty()) continue;

    int apex = -1;
    double far = -1.0;
    for (int i : faces[fid].outside) {
      const double dist = faces[fid].n.dot(p.col(i)) - faces[fid].off;
      if (dist > far) far = dist, apex = i;
    }
    const Eigen::Vector3d q = p.col(apex);
    if (!above(faces[fid], q)) {
      auto& out = faces[fid].outside;
      out.erase(std::find(out.begin(), out.end(), apex));
      pending.push_back(fid);
      continue;
    }

    is_visible.assign(faces.size(), 0);
    visible.clear();
    stack = {fid};
    is_visible[fid] = 1;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      visible.push_back(f);
      for (int e = 0; e < 3; ++e) {
        const int u = faces[f].v[e], v = faces[f].v[(e + 1) % 3];
        const int g = edge_owner.at(key(v, u));
        if (is_visible[g]) continue;
        if (above(faces[g], q)) {
          is_visible[g] = 1;
          stack.push_back(g);
        }
      }
    }

    std::vector<std::pair<int, int>> horizon;
    for (int f : visible)
      for (int e = 0; e < 3; ++e) {
        const int u = faces[f].v[e], v = faces[f].v[(e + 1) % 3];
        const int g = edge_owner.at(key(v, u));
        if (!is_visible[g]) horizon.emplace_back(u, v);
      }

    std::vector<int> orphans;
    for (int f : visible) {
      faces[f].alive = false;
      for (int e = 0; e < 3; ++e) edge_owner.erase(key(faces[f].v[e], faces[f].v[(e + 1) % 3]));
      for (int i : faces[f].outside)
        if (i != apex) orphans.push_back(i);
      faces[f].outside.clear();
      faces[f].outside.shrink_to_fit();
    }

    new_faces.clear();
    for (auto [u, v] : horizon) {
      const Eigen::Vector3d fallback = faces[edge_owner.at(key(v, u))].n;
      new_faces.push_back(add_face(u, v, apex, fallback));
    }
    for (int i : orphans)
      for (int f : new_faces)
        if (faces[f].n.dot(p.col(i)) - faces[f].off > eps) {
          faces[f].outside.push_back(i);
          break;
        }
    for (int f : new_faces)
      if (!faces[f].outside.empty()) pending.push_back(f);
  }

  SymmetricHull h;
  std::vector<int> live;
  std::vector<int> verts;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f)
    if (faces[f].alive) {
      live.push_back(f);
      verts.insert(verts.end(), faces[f].v.begin(), faces[f].v.end());
    }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  Eigen::Matrix3Xd vp(3, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t j = 0; j < verts.size(); ++j) vp.col(j) = p.col(verts[j]);
  // Rounded normals of thin faces may tilt; raise offsets so every facet supports the hull.
  for (int f : live) faces[f].off = std::max(faces[f].off, (faces[f].n.transpose() * vp).maxCoeff());
  h.normals.resize(3, static_cast<Eigen::Index>(live.size()));
  h.offsets.resize(static_cast<Eigen::Index>(live.size()));
  for (std::size_t j = 0; j < live.size(); ++j) {
    const Face& f = faces[live[j]];
    h.normals.col(j) = f.n;
    h.offsets(j) = f.off;
    for (int v : f.v) h.extreme.push_back(v < k ? v : v - k);
  }
  std::sort(h.extreme.begin(), h.extreme.end());
  h.extreme.erase(std::unique(h.extreme.begin(), h.extreme.end()), h.extreme.end());
  return h;
}

}  // namespace

SymmetricHull symmetric_hull(const Mat& pts, double rel_tol) {
  if (pts.cols() == 0) throw InputError("symmetric_hull: no points");
  switch (pts.rows()) {
    case 1:
      return hull_1d(pts);
    case 2:
      return hull_2d(pts, rel_tol);
    case 3:
      return hull_3d(pts, rel_tol);
    default:
      throw InputError("symmetric_hull: only ranks 1 to 3 are supported");
  }
}

}  // namespace mw
