#pragma once

#include "mw/muckenhoupt.hpp"

namespace mw {

/// Cellwise ball hull{±t(d) d}, t(d) = (gauge_{F0}(d)^{1/p'} h_{F1}(d)^{1/p})^{-1},
/// over the direction grid plus the per-cell directions of `extra`.
/// Directions with infinite gauge are dropped.
NormFunction interpolate_norm(const ConvexField& f0, const ConvexField& f1, double p,
                              const std::vector<VectorField>& extra = {});

/// sup over the family of |Q|^{-1} ‖A_Q A'_Q‖ for u -> ‖1_Q u‖_{L^p_ρ} and
/// v -> ‖1_Q v‖_{L^{p'}_{ρ*}}; exact scalar averages for n = 1.
ApReport verify_rho_ap(const NormFunction& rho, double p, const CubeCollection& fam, double eps = 1e-6);

struct ExtrapolationOptions {
  int k_trunc = 12;
  double m_hat = 0.0;       // 0: probe estimate times `inflation`
  double m_hat_dual = 0.0;
  double inflation = 4.0;
  int probe_trials = 16;
  std::uint64_t seed = 0;
  double eps = 1e-6;
  int jobs = 1;
};

struct ExtrapolationCertificate {
  double p = 2.0;
  NormFunction rho;
  VectorField f;
  VectorField g;
  int k_trunc = 0;
  double ap_of_rho = 0.0;
  double ap_ratio = 0.0;       // ap_of_rho / (M^{1/p'} M'^{1/p})
  double product_lhs = 0.0;    // ‖f‖_{L^p_ρ} ‖g‖_{L^{p'}_{ρ*}}
  double product_rhs = 0.0;    // ‖f‖_X ‖g‖_{X'}
  double m_hat = 0.0;
  double m_hat_dual = 0.0;
  double max_selection_gauge = 0.0;  // max_x gauge_{F0(x)}(f(x))
  bool product_holds = false;
  bool selection_holds = false;
};

ExtrapolationCertificate construct_weight(const VectorField& f, const VectorField& g, const LpWSpace& base,
                                          const CubeCollection& c, double p, const ExtrapolationOptions& opt = {});

struct TransferDemo {
  double pairing = 0.0;        // ∫ |T_S f · g|
  double holder_bound = 0.0;   // ‖T_S f‖_{L^p_ρ} ‖g‖_{L^{p'}_{ρ*}}
  double op_ratio = 0.0;       // ‖T_S f‖_{L^p_ρ} / ‖f‖_{L^p_ρ}
  double transferred = 0.0;    // op_ratio · 2 ‖f‖_X ‖g‖_{X'}
  bool holds = false;
};

TransferDemo sparse_transfer_demo(const ExtrapolationCertificate& cert, const CubeCollection& s);

}  // namespace mw
