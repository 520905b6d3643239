#include "mw/extrapolation.hpp"

#include "mw/errors.hpp"
#include "mw/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace mw {
namespace {

double powered(double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); }

double rho_cube_norm(const NormFunction& rho, const DyadicCube& q, double p, const Vec& u, bool dual) {
  const DyadicGrid& grid = rho.grid();
  const std::int64_t first = grid.first_cell(q);
  const std::int64_t span = grid.cell_span(q);
  std::vector<double> h(grid.cell_count(), 0.0);
  for (std::int64_t c = first; c < first + span; ++c) h[c] = dual ? rho.rho_star(c, u) : rho.rho(c, u);
  return scalar_norm(h, p, grid, q);
}

}  // namespace

NormFunction interpolate_norm(const ConvexField& f0, const ConvexField& f1, double p,
                              const std::vector<VectorField>& extra) {
  if (!(f0.grid() == f1.grid()) || f0.n() != f1.n()) throw InputError("interpolate_norm: fields differ in shape");
  if (p < 1.0) throw InputError("interpolate_norm: p must be >= 1");
  const int n = f0.n();
  const double a = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  const double b = std::isinf(p) ? 0.0 : 1.0 / p;
  const Mat& grid = direction_grid(n);
  const Eigen::Index half = grid.cols() / 2;
  std::vector<ConvexBody> balls(f0.cells());
  for (std::int64_t c = 0; c < f0.cells(); ++c) {
    Mat dirs(n, half + static_cast<Eigen::Index>(extra.size()));
    dirs.leftCols(half) = grid.leftCols(half);
    Eigen::Index m = half;
    for (const auto& e : extra) {
      const Vec d = e.at(c);
      if (d.norm() > 0.0) dirs.col(m++) = d / d.norm();
    }
    Mat pts(n, m);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vec d = dirs.col(j);
      const double psi = powered(f0.at(c).gauge(d), a) * powered(f1.at(c).support(d), b);
      if (std::isinf(psi)) continue;
      if (!(psi > 0.0)) throw InputError("interpolate_norm: unbounded ball at cell " + std::to_string(c));
      pts.col(k++) = d / psi;
    }
    if (k == 0) throw InputError("interpolate_norm: every direction dropped at cell " + std::to_string(c));
    balls[c] = ConvexBody::from_points(pts.leftCols(k));
    if (balls[c].rank() < n) throw InputError("interpolate_norm: rank-deficient ball at cell " + std::to_string(c));
  }
  return NormFunction(f0.grid(), n, std::move(balls));
}

ApReport verify_rho_ap(const NormFunction& rho, double p, const CubeCollection& fam, double eps) {
  if (fam.empty()) throw InputError("verify_rho_ap: empty cube family");
  const double pd = dual_exponent(p);
  const int n = rho.n();
  ApReport rep;
  rep.p = p;
  for (const auto& q : fam.cubes()) {
    ApRow row;
    row.cube = q;
    if (n == 1) {
      const Vec one = Vec::Ones(1);
      row.value = rho_cube_norm(rho, q, p, one, false) * rho_cube_norm(rho, q, pd, one, true) / q.measure();
      row.upper = row.value;
      row.witness_ratio = row.value;
    } else {
      const ReducingMatrix a =
          reducing_matrix_of_norm(n, [&](const Vec& u) { return rho_cube_norm(rho, q, p, u, false); }, eps);
      const ReducingMatrix ad =
          reducing_matrix_of_norm(n, [&](const Vec& v) { return rho_cube_norm(rho, q, pd, v, true); }, eps);
      row.value = spectral_norm(a.a * ad.a) / q.measure();
      row.upper = a.sandwich * ad.sandwich * row.value;
      row.witness_ratio = row.value / n;
    }
    if (rep.argmax < 0 || row.value > rep.sup) {
      rep.sup = row.value;
      rep.argmax = static_cast<int>(rep.rows.size());
    }
    rep.bracket_lo = std::max(rep.bracket_lo, row.witness_ratio);
    rep.bracket_hi = std::max(rep.bracket_hi, row.upper);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ExtrapolationCertificate construct_weight(const VectorField& f, const VectorField& g, const LpWSpace& base,
                                          const CubeCollection& c, double p, const ExtrapolationOptions& opt) {
  const LpWSpace dual = base.dual();
  const double nf = lp_norm(f, base);
  const double ng = lp_norm(g, dual);
  if (nf == 0.0 || ng == 0.0) throw InputError("construct_weight: f and g must be nonzero");
  double m = opt.m_hat;
  double md = opt.m_hat_dual;
  if (m <= 0.0) m = opt.inflation * std::max(1.0, maximal_norm_probe(base, c, opt.probe_trials, opt.seed));
  if (md <= 0.0) md = opt.inflation * std::max(1.0, maximal_norm_probe(dual, c, opt.probe_trials, opt.seed ^ 1));

  const RdfResult r0 = rdf(kf(f), c, base, opt.k_trunc, m, 1024, opt.jobs);
  const RdfResult r1 = rdf(kf(g), c, dual, opt.k_trunc, md, 1024, opt.jobs);

  ExtrapolationCertificate cert;
  cert.p = p;
  cert.f = f;
  cert.g = g;
  cert.k_trunc = opt.k_trunc;
  cert.m_hat = r0.m_hat;
  cert.m_hat_dual = r1.m_hat;
  cert.rho = interpolate_norm(r0.field, r1.field, p, {f});

  const double pd = dual_exponent(p);
  cert.product_lhs = rho_norm(f, cert.rho, p) * rho_star_norm(g, cert.rho, pd);
  cert.product_rhs = nf * ng;
  cert.product_holds = cert.product_lhs <= 2.0 * cert.product_rhs * (1.0 + 1e-6);

  for (std::int64_t cell = 0; cell < f.cells(); ++cell) {
    const Vec u = f.at(cell);
    if (u.norm() > 0.0) cert.max_selection_gauge = std::max(cert.max_selection_gauge, r0.field.at(cell).gauge(u));
  }
  cert.selection_holds = cert.max_selection_gauge <= 1.0 + 1e-12;

  cert.ap_of_rho = verify_rho_ap(cert.rho, p, c, opt.eps).sup;
  const double a = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  const double b = std::isinf(p) ? 0.0 : 1.0 / p;
  cert.ap_ratio = cert.ap_of_rho / (powered(cert.m_hat, a) * powered(cert.m_hat_dual, b));
  return cert;
}

TransferDemo sparse_transfer_demo(const ExtrapolationCertificate& cert, const CubeCollection& s) {
  TransferDemo demo;
  const VectorField tf = t_sparse(cert.f, s);
  const double pd = dual_exponent(cert.p);
  const double ntf = rho_norm(tf, cert.rho, cert.p);
  const double nf = rho_norm(cert.f, cert.rho, cert.p);
  demo.pairing = pairing(tf, cert.g);
  demo.holder_bound = ntf * rho_star_norm(cert.g, cert.rho, pd);
  demo.op_ratio = nf == 0.0 ? 0.0 : ntf / nf;
  demo.transferred = demo.op_ratio * 2.0 * cert.product_rhs;
  demo.holds = demo.pairing <= demo.holder_bound * (1.0 + 1e-12) &&
               demo.holder_bound <= demo.transferred * (1.0 + 1e-6);
  return demo;
}

}  // namespace mw
