#pragma once

#include "mw/linalg.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mw {

/// Dyadic cube of [0,1)^d: level j and integer corner c, covering
/// prod_i [c_i 2^-j, (c_i + 1) 2^-j).
struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> corner;

  int dim() const { return static_cast<int>(corner.size()); }
  double measure() const;
  DyadicCube parent() const;
  std::vector<DyadicCube> children() const;
  /// True if `other` ⊆ *this.
  bool contains(const DyadicCube& other) const;

  auto operator<=>(const DyadicCube&) const = default;
  bool operator==(const DyadicCube&) const = default;
};

DyadicCube unit_cube(int d);

/// Uniform grid of 2^{dL} cells on [0,1)^d. Cells are numbered in Morton
/// (Z) order, so every dyadic cube owns a contiguous range of cells.
class DyadicGrid {
 public:
  DyadicGrid() = default;
  DyadicGrid(int d, int depth);

  int d() const { return d_; }
  int depth() const { return depth_; }
  std::int64_t cell_count() const { return std::int64_t{1} << (d_ * depth_); }
  double cell_measure() const;

  std::int64_t morton(const std::vector<std::int64_t>& coords, int level) const;
  std::vector<std::int64_t> unmorton(std::int64_t code, int level) const;

  bool contains(const DyadicCube& q) const;
  /// First cell of q and the number of cells it covers.
  std::int64_t first_cell(const DyadicCube& q) const;
  std::int64_t cell_span(const DyadicCube& q) const { return std::int64_t{1} << (d_ * (depth_ - q.level)); }
  /// Level-j cube containing the cell.
  DyadicCube cube_of_cell(std::int64_t cell, int level) const;
  Vec cell_center(std::int64_t cell) const;

  bool operator==(const DyadicGrid&) const = default;

 private:
  int d_ = 1;
  int depth_ = 0;
};

/// Sorted, duplicate-free set of cubes of one grid.
class CubeCollection {
 public:
  CubeCollection() = default;
  CubeCollection(DyadicGrid grid, std::vector<DyadicCube> cubes);

  const DyadicGrid& grid() const { return grid_; }
  const std::vector<DyadicCube>& cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  bool empty() const { return cubes_.empty(); }
  bool contains(const DyadicCube& q) const;

  /// For every cell, indices (into cubes()) of the cubes containing it,
  /// coarsest first.
  std::vector<std::vector<int>> memberships() const;
  /// Cubes not strictly contained in another member.
  std::vector<DyadicCube> maximal() const;

 private:
  DyadicGrid grid_;
  std::vector<DyadicCube> cubes_;
};

struct Verdict {
  bool holds = true;
  std::optional<DyadicCube> witness;
  std::optional<DyadicCube> other;
  explicit operator bool() const { return holds; }
};

CubeCollection all_cubes(const DyadicGrid& grid, int min_level, int max_level);
/// |∪{Q' ∈ S : Q' ⊊ Q}| <= |Q|/2 for every Q, in integer cell counts.
Verdict is_sparse(const CubeCollection& s);
Verdict is_pairwise_disjoint(const CubeCollection& p);
/// sum_{Q' ∈ S, Q' ⊆ Q} |Q'| <= constant·|Q| for every Q ∈ S.
Verdict carleson_packing(const CubeCollection& s, std::int64_t constant = 2);

void write_collection(std::ostream& out, const CubeCollection& c);
CubeCollection read_collection(std::istream& in, const DyadicGrid& grid);

}  // namespace mw
