#pragma once

#include "mw/operators.hpp"

namespace mw {

struct ApRow {
  DyadicCube cube;
  double value = 0.0;    // |Q|^{-1} ‖A_X A_X'‖
  double upper = 0.0;    // certified bound on ‖T_Q‖
  double witness_ratio = 0.0;
  Vec u;
  Vec v;
  /// ⟨|W u|^p⟩^{1/p} ⟨|W^{-1} v|^{p'}⟩^{1/p'} / |u·v|, evaluated directly (<= upper).
  double witness_constant = 0.0;
};

struct ApReport {
  double p = 2.0;
  std::vector<ApRow> rows;
  double sup = 0.0;
  int argmax = -1;
  double bracket_lo = 0.0;  // max certified witness ratio
  double bracket_hi = 0.0;  // max certified upper bound
};

ApReport ap_constant(const LpWSpace& s, const CubeCollection& fam, double eps = 1e-6, int jobs = 1);

/// Averaged product ⟨|W u|^p⟩_Q^{1/p} ⟨|W^{-1} v|^{p'}⟩_Q^{1/p'}.
double averaged_product(const LpWSpace& s, const DyadicCube& q, const Vec& u, const Vec& v);

struct StrongReport {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> per_partition;
};

/// Lower bound max_P ‖T_P‖ by probing, upper bound max_{Q} ‖T_Q‖ brackets
/// (exact for L^p_W since ‖T_P‖ = max_{Q ∈ P} ‖T_Q‖).
StrongReport a_strong_constant(const LpWSpace& s, const std::vector<CubeCollection>& partitions, int trials,
                               std::uint64_t seed, double eps = 1e-6);

struct WeakReport {
  double ratio = 0.0;
  int best_probe = -1;
  std::vector<double> ratios;
};

/// max over probe fields f of weak_body_norm(M^𝒦_C 𝒦(f))/‖f‖, candidates
/// being the averages ⟨f⟩_Q, Q ∈ C, and the boundary points of M^𝒦_C 𝒦(f).
/// `extra` probes are evaluated before the `trials` random ones.
WeakReport weak_maximal_norm(const LpWSpace& s, const CubeCollection& c, int trials, std::uint64_t seed,
                             const std::vector<VectorField>& extra = {}, int jobs = 1);

}  // namespace mw
