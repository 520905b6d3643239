#include "mw/dyadic.hpp"

#include "mw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace mw {

double DyadicCube::measure() const { return std::ldexp(1.0, -level * dim()); }

DyadicCube DyadicCube::parent() const {
  if (level == 0) throw InputError("parent: the unit cube has no parent");
  DyadicCube p{level - 1, corner};
  for (auto& c : p.corner) c >>= 1;
  return p;
}

std::vector<DyadicCube> DyadicCube::children() const {
  const int d = dim();
  std::vector<DyadicCube> out;
  out.reserve(std::size_t{1} << d);
  for (int mask = 0; mask < (1 << d); ++mask) {
    DyadicCube c{level + 1, corner};
    for (int i = 0; i < d; ++i) c.corner[i] = 2 * corner[i] + ((mask >> i) & 1);
    out.push_back(std::move(c));
  }
  return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.level < level || other.dim() != dim()) return false;
  const int shift = other.level - level;
  for (int i = 0; i < dim(); ++i)
    if ((other.corner[i] >> shift) != corner[i]) return false;
  return true;
}

DyadicCube unit_cube(int d) { return DyadicCube{0, std::vector<std::int64_t>(d, 0)}; }

DyadicGrid::DyadicGrid(int d, int depth) : d_(d), depth_(depth) {
  if (d < 1 || depth < 0) throw InputError("DyadicGrid: need d >= 1 and depth >= 0");
  if (d * depth > 40) throw InputError("DyadicGrid: too many cells");
}

double DyadicGrid::cell_measure() const { return std::ldexp(1.0, -d_ * depth_); }

std::int64_t DyadicGrid::morton(const std::vector<std::int64_t>& coords, int level) const {
  std::int64_t code = 0;
  for (int b = 0; b < level; ++b)
    for (int i = 0; i < d_; ++i) code |= ((coords[i] >> b) & 1) << (b * d_ + i);
  return code;
}

std::vector<std::int64_t> DyadicGrid::unmorton(std::int64_t code, int level) const {
  std::vector<std::int64_t> c(d_, 0);
  for (int b = 0; b < level; ++b)
    for (int i = 0; i < d_; ++i) c[i] |= ((code >> (b * d_ + i)) & 1) << b;
  return c;
}

bool DyadicGrid::contains(const DyadicCube& q) const {
  if (q.dim() != d_ || q.level < 0 || q.level > depth_) return false;
  const std::int64_t side = std::int64_t{1} << q.level;
  return std::all_of(q.corner.begin(), q.corner.end(), [&](std::int64_t c) { return c >= 0 && c < side; });
}

std::int64_t DyadicGrid::first_cell(const DyadicCube& q) const {
  if (!contains(q)) throw InputError("cube outside the grid");
  return morton(q.corner, q.level) << (d_ * (depth_ - q.level));
}

DyadicCube DyadicGrid::cube_of_cell(std::int64_t cell, int level) const {
  return DyadicCube{level, unmorton(cell >> (d_ * (depth_ - level)), level)};
}

Vec DyadicGrid::cell_center(std::int64_t cell) const {
  const auto c = unmorton(cell, depth_);
  Vec x(d_);
  for (int i = 0; i < d_; ++i) x(i) = std::ldexp(static_cast<double>(c[i]) + 0.5, -depth_);
  return x;
}

CubeCollection::CubeCollection(DyadicGrid grid, std::vector<DyadicCube> cubes)
    : grid_(grid), cubes_(std::move(cubes)) {
  for (const auto& q : cubes_)
    if (!grid_.contains(q)) throw InputError("CubeCollection: cube outside the grid");
  std::sort(cubes_.begin(), cubes_.end());
  cubes_.erase(std::unique(cubes_.begin(), cubes_.end()), cubes_.end());
}

bool CubeCollection::contains(const DyadicCube& q) const { return std::binary_search(cubes_.begin(), cubes_.end(), q); }

std::vector<std::vector<int>> CubeCollection::memberships() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(grid_.cell_count()));
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    const std::int64_t first = grid_.first_cell(cubes_[i]);
    const std::int64_t span = grid_.cell_span(cubes_[i]);
    for (std::int64_t c = first; c < first + span; ++c) out[c].push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

struct Interval {
  std::int64_t start;
  std::int64_t len;
  int index;
};

// Cubes as cell intervals in pre-order: a cube precedes everything inside it.
std::vector<Interval> preorder(const CubeCollection& s) {
  std::vector<Interval> iv;
  iv.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    iv.push_back({s.grid().first_cell(s.cubes()[i]), s.grid().cell_span(s.cubes()[i]), static_cast<int>(i)});
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
    return a.start != b.start ? a.start < b.start : a.len > b.len;
  });
  return iv;
}

}  // namespace

std::vector<DyadicCube> CubeCollection::maximal() const {
  std::vector<DyadicCube> out;
  std::int64_t covered_to = -1;
  for (const auto& iv : preorder(*this)) {
    if (iv.start < covered_to) continue;
    out.push_back(cubes_[iv.index]);
    covered_to = iv.start + iv.len;
  }
  std::sort(out.begin(), out.end());
  return out;
}

CubeCollection all_cubes(const DyadicGrid& grid, int min_level, int max_level) {
  if (min_level < 0 || min_level > max_level || max_level > grid.depth())
    throw InputError("all_cubes: level range outside [0, depth]");
  std::vector<DyadicCube> cubes;
  for (int j = min_level; j <= max_level; ++j) {
    const std::int64_t count = std::int64_t{1} << (grid.d() * j);
    for (std::int64_t m = 0; m < count; ++m) cubes.push_back(DyadicCube{j, grid.unmorton(m, j)});
  }
  return CubeCollection(grid, std::move(cubes));
}

Verdict is_sparse(const CubeCollection& s) {
  const auto iv = preorder(s);
  for (std::size_t a = 0; a < iv.size(); ++a) {
    const std::int64_t end = iv[a].start + iv[a].len;
    std::int64_t covered = 0;
    std::int64_t reach = iv[a].start;
    for (std::size_t b = a + 1; b < iv.size() && iv[b].start < end; ++b) {
      if (iv[b].len == iv[a].len) continue;
      const std::int64_t stop = iv[b].start + iv[b].len;
      if (stop <= reach) continue;
      covered += stop - std::max(reach, iv[b].start);
      reach = stop;
    }
    if (2 * covered > iv[a].len) return Verdict{false, s.cubes()[iv[a].index], std::nullopt};
  }
  return Verdict{};
}

Verdict is_pairwise_disjoint(const CubeCollection& p) {
  const auto iv = preorder(p);
  for (std::size_t a = 0; a + 1 < iv.size(); ++a)
    if (iv[a + 1].start < iv[a].start + iv[a].len)
      return Verdict{false, p.cubes()[iv[a].index], p.cubes()[iv[a + 1].index]};
  return Verdict{};
}

Verdict carleson_packing(const CubeCollection& s, std::int64_t constant) {
  const auto iv = preorder(s);
  for (std::size_t a = 0; a < iv.size(); ++a) {
    const std::int64_t end = iv[a].start + iv[a].len;
    std::int64_t total = 0;
    for (std::size_t b = a; b < iv.size() && iv[b].start < end; ++b) total += iv[b].len;
    if (total > constant * iv[a].len) return Verdict{false, s.cubes()[iv[a].index], std::nullopt};
  }
  return Verdict{};
}

void write_collection(std::ostream& out, const CubeCollection& c) {
  for (const auto& q : c.cubes()) {
    out << q.level;
    for (auto x : q.corner) out << ' ' << x;
    out << '\n';
  }
}

CubeCollection read_collection(std::istream& in, const DyadicGrid& grid) {
  std::vector<DyadicCube> cubes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    DyadicCube q;
    if (!(ls >> q.level)) throw InputError("read_collection: bad line '" + line + "'");
    q.corner.resize(grid.d());
    for (auto& c : q.corner)
      if (!(ls >> c)) throw InputError("read_collection: bad line '" + line + "'");
    cubes.push_back(std::move(q));
  }
  return CubeCollection(grid, std::move(cubes));
}

}  // namespace mw
