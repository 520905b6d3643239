#pragma once

#include "mw/spaces.hpp"

#include <string>

namespace mw {

/// T_Q F = ⟨F⟩_Q 1_Q.
ConvexField t_cube(const ConvexField& f, const DyadicCube& q);
/// Sum of T_E over a pairwise disjoint collection; throws otherwise.
ConvexField t_disjoint(const ConvexField& f, const CubeCollection& p);
/// Cellwise Minkowski sum of ⟨F⟩_Q over the cubes of a sparse collection.
ConvexField t_sparse(const ConvexField& f, const CubeCollection& s);
/// Cellwise hull of ⟨F⟩_Q over the cubes containing the cell.
ConvexField maximal(const ConvexField& f, const CubeCollection& c, int cap = kVertexCap, int jobs = 1);

VectorField t_cube(const VectorField& f, const DyadicCube& q);
VectorField t_disjoint(const VectorField& f, const CubeCollection& p);
VectorField t_sparse(const VectorField& f, const CubeCollection& s);

/// A linear averaging operator on vector fields.
struct AveragingOperator {
  enum class Kind { Cube, Disjoint, Sparse };
  Kind kind = Kind::Cube;
  CubeCollection cubes;

  static AveragingOperator cube(const DyadicGrid& grid, const DyadicCube& q);
  static AveragingOperator disjoint(const CubeCollection& p);
  static AveragingOperator sparse(const CubeCollection& s);

  std::string id() const;
  VectorField apply(const VectorField& f) const;
};

/// norm_estimate is the reported value; [bracket_lo, bracket_hi] contains
/// the true operator norm; the witness attains bracket_lo.
struct OperatorReport {
  std::string op;
  std::string space;
  double p = 2.0;
  double norm_estimate = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = kInf;
  VectorField witness;
  int trials = 0;
  std::uint64_t seed = 0;
};

enum class NormMode { ExactSmall, Probe };

/// ExactSmall is available for a single cube (reducing matrices) and for
/// n = 1; Probe maximizes ‖op f‖/‖f‖ over seeded random and structured fields.
OperatorReport operator_norm_estimate(const AveragingOperator& op, const LpWSpace& s, NormMode mode,
                                      int trials = 64, std::uint64_t seed = 0, double eps = 1e-6);

/// Exact data for T_Q on L^p_W.
struct CubeNorm {
  DyadicCube cube;
  double value = 0.0;    // |Q|^{-1} ‖A_X A_X'‖
  double upper = 0.0;    // certified ‖T_Q‖ <= upper
  double sandwich = 1.0; // s_X s_X'
  Vec u;                 // u = A_X' r
  Vec v;                 // v = A_X'^{-1} r
  VectorField witness;   // field with ‖T_Q f‖/‖f‖ = witness_ratio
  double witness_ratio = 0.0;
};

CubeNorm cube_norm(const LpWSpace& s, const DyadicCube& q, double eps = 1e-6);

/// max over seeded random F of ‖M F‖/‖F‖ on the convex-field space.
double maximal_norm_probe(const LpWSpace& s, const CubeCollection& c, int trials, std::uint64_t seed);

struct RdfResult {
  ConvexField field;
  double m_hat = 1.0;      // bound used in the series (>= the supplied one)
  double tail_bound = 0.0; // 2^{-K} ‖F‖
  std::vector<double> step_ratios;
};

/// R_K F = sum_{k=0}^{K} 2^{-k} M^{-k} (M^𝒦_C)^k F. M is raised above the
/// supplied bound when a measured step ratio ‖M^k F‖/‖M^{k-1} F‖ exceeds
/// it, which keeps ‖R_K F‖ <= 2‖F‖. Iterates are pruned to `iterate_cap`.
RdfResult rdf(const ConvexField& f, const CubeCollection& c, const LpWSpace& s, int k_trunc, double m_hat,
              int iterate_cap = 1024, int jobs = 1);

/// Random polytope field: per cell `points` Gaussian points times a heavy
/// tailed scale; cells are zero with probability `zero_prob`.
ConvexField random_convex_field(const DyadicGrid& grid, int n, int points, double zero_prob, CounterRng& rng);
VectorField random_vector_field(const DyadicGrid& grid, int n, CounterRng& rng);

}  // namespace mw
