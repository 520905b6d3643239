#include "mwcli/suite.hpp"

#include "mwcli/csv.hpp"

#include <mw/errors.hpp>
#include <mw/extrapolation.hpp>
#include <mw/muckenhoupt.hpp>
#include <mw/parallel.hpp>
#include <mw/sparse.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mwcli {

using mw::ConvexBody;
using mw::ConvexField;
using mw::CounterRng;
using mw::CubeCollection;
using mw::DyadicCube;
using mw::DyadicGrid;
using mw::LpWSpace;
using mw::Mat;
using mw::MatrixWeight;
using mw::Vec;
using mw::VectorField;

namespace {

struct Instance {
  bool ok = true;
  double metric = 0.0;
  std::string failure;
  std::vector<std::pair<std::string, double>> measured;

  void fail(const std::string& why) {
    if (ok) failure = why;
    ok = false;
  }
  void check(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

struct Scale {
  bool smoke = false;
  int count(int full, int small) const { return smoke ? small : full; }
};

std::string describe(int id, int i, const std::string& msg) {
  std::ostringstream s;
  s << "criterion " << id << " instance " << i << ": " << msg;
  return s.str();
}

Mat random_spd(int n, CounterRng& rng, double spread) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = qr.householderQ();
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam(i) = std::exp(spread * rng.normal());
  Mat a = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

MatrixWeight random_weight(const DyadicGrid& grid, int n, CounterRng& rng) {
  mw::WeightSpec spec;
  spec.n = n;
  spec.seed = rng.next_u64();
  switch (rng.below(3)) {
    case 0:
      spec.kind = mw::WeightSpec::Kind::Random;
      spec.spread = rng.uniform(0.3, 1.5);
      break;
    case 1: {
      spec.kind = mw::WeightSpec::Kind::Rotating;
      spec.omega = rng.uniform(1.0, 8.0);
      spec.lambda = Vec(n);
      for (int i = 0; i < n; ++i) spec.lambda(i) = std::exp(rng.uniform(0.0, 2.5));
      break;
    }
    default:
      spec.kind = mw::WeightSpec::Kind::Power;
      spec.exponent = rng.uniform(-0.9, 0.9);
      spec.axis = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.d())));
      break;
  }
  return mw::make_weight(spec, grid);
}

CubeCollection random_partition(const DyadicGrid& grid, CounterRng& rng) {
  std::vector<DyadicCube> leaves;
  std::vector<DyadicCube> stack{mw::unit_cube(grid.d())};
  while (!stack.empty()) {
    DyadicCube q = stack.back();
    stack.pop_back();
    if (q.level < grid.depth() && rng.uniform() < 0.6) {
      for (auto& c : q.children()) stack.push_back(c);
    } else if (rng.uniform() < 0.85 || leaves.empty()) {
      leaves.push_back(q);
    }
  }
  return CubeCollection(grid, leaves);
}

double random_p(CounterRng& rng) {
  static const double choices[] = {1.0, 1.5, 2.0, 3.0, INFINITY};
  return choices[rng.below(5)];
}

std::string fmt_short(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

template <class Fn>
CriterionResult run_criterion(int id, const std::string& name, int count, double bound, int jobs,
                              std::vector<Measurement>& measurements, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Instance> out(static_cast<std::size_t>(count));
  mw::parallel_for(out.size(), jobs, [&](std::size_t i) {
    try {
      body(static_cast<int>(i), out[i]);
    } catch (const std::exception& e) {
      out[i].fail(std::string("exception: ") + e.what());
    }
  });
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.instances = count;
  r.bound = bound;
  r.passed = true;
  for (int i = 0; i < count; ++i) {
    const Instance& inst = out[static_cast<std::size_t>(i)];
    r.metric = std::max(r.metric, inst.metric);
    if (!inst.ok && r.passed) {
      r.passed = false;
      r.detail = describe(id, i, inst.failure);
    }
    for (const auto& [q, v] : inst.measured) measurements.push_back({id, i, q, v});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// 1. Stopping-time sparse domination.
CriterionResult sparse_domination(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x1000);
  return run_criterion(1, "sparse_domination", sc.count(200, 12), 1.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const int d = 1 + (i / 3) % 2;
    const int lo = d == 1 ? 2 : 1;
    const int hi = d == 1 ? (n < 3 ? 5 : 4) : (n < 3 ? 3 : 2);
    const int depth = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    const DyadicGrid grid(d, depth);
    const ConvexField f = mw::random_convex_field(grid, n, 2, 0.15, rng);
    std::vector<DyadicCube> keep;
    const CubeCollection all = mw::all_cubes(grid, 0, depth);
    for (const auto& q : all.cubes())
      if (rng.uniform() < 0.7) keep.push_back(q);
    if (keep.empty()) keep.push_back(mw::unit_cube(d));
    const CubeCollection fam(grid, keep);
    const mw::StoppingTree tree = mw::sparse_dominate(f, fam);
    const mw::DominationReport rep = mw::verify_domination(f, fam, tree, 1e-7);
    inst.metric = rep.measured_factor / rep.constant;
    inst.measured.push_back({"measured_factor", rep.measured_factor});
    inst.check(rep.sparse, "selected collection is not sparse");
    inst.check(rep.packing, "packing condition violated");
    inst.check(rep.between, "surviving cube exceeds a stopping threshold");
    inst.check(rep.intermediate, "intermediate inclusion fails");
    inst.check(rep.holds, "domination fails at cell " + std::to_string(rep.worst_cell) + " factor " +
                              fmt_short(rep.measured_factor));
  });
}

// 2. John sandwich.
CriterionResult john_sandwich(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x2000);
  const double eps = 1e-5;
  return run_criterion(2, "john_sandwich", sc.count(500, 30), 1.0 + eps, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 6;
    ConvexBody k;
    if (i % 5 == 4) {
      k = ConvexBody::ellipsoid(random_spd(n, rng, 1.0));
    } else {
      const int m = n + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(3 * n)));
      Mat pts(n, m);
      for (int c = 0; c < m; ++c)
        for (int r = 0; r < n; ++r) pts(r, c) = rng.normal() * (1.0 + r);
      k = ConvexBody::from_points(pts);
    }
    const mw::EllipsoidFit fit = mw::loewner_fit(k, eps);
    const Mat& e = fit.inner;
    const Mat einv = e.inverse();
    double outer = 0.0;
    double inner = 0.0;
    if (k.kind() == mw::BodyKind::Ellipsoid) {
      outer = mw::spectral_norm(einv * k.shape());
      inner = mw::spectral_norm(k.shape().inverse() * e);
    } else {
      outer = (einv * k.vertices()).colwise().norm().maxCoeff();
      Mat dirs(n, 200 + 2 * n);
      for (int c = 0; c < 200; ++c) {
        Vec g(n);
        for (int r = 0; r < n; ++r) g(r) = rng.normal();
        dirs.col(c) = g / g.norm();
      }
      dirs.middleCols(200, n) = Mat::Identity(n, n);
      dirs.rightCols(n) = -Mat::Identity(n, n);
      inner = k.max_gauge(e * dirs);
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    inst.metric = std::max(inner, outer / root_n);
    inst.check(inner <= 1.0 + eps, "inscribed ellipsoid leaves K: factor " + fmt_short(inner));
    inst.check(outer <= root_n * (1.0 + eps), "K leaves sqrt(n) inscribed: factor " + fmt_short(outer / root_n));
  });
}

// 3. Constant weights give [W] = 1.
CriterionResult constant_weight(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x3000);
  static const double ps[] = {1.0, 1.5, 2.0, 3.0, INFINITY};
  const int reps = sc.count(3, 1);
  return run_criterion(3, "constant_weight_exactness", 4 * 5 * reps, 1e-4, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i / (5 * reps);
    const double p = ps[(i / reps) % 5];
    const int d = 1 + i % 2;
    const DyadicGrid grid(d, d == 1 ? 3 : 2);
    const MatrixWeight w(grid, std::vector<Mat>(static_cast<std::size_t>(grid.cell_count()), random_spd(n, rng, 1.0)));
    const mw::ApReport ap = mw::ap_constant(LpWSpace{p, w}, mw::all_cubes(grid, 0, grid.depth()));
    inst.metric = std::abs(ap.sup - 1.0);
    inst.check(inst.metric <= 1e-4, "sup " + fmt_short(ap.sup) + " at p = " + fmt_short(p));
    for (const auto& row : ap.rows)
      inst.check(row.witness_constant <= row.upper * (1.0 + 1e-9), "witness constant above its bracket");
  });
}

// Classical stopping cubes for n = 1, by direct recursion over averages of |f|.
void classical_stopping(const VectorField& f, const DyadicCube& q0, std::vector<DyadicCube>& out) {
  const DyadicGrid& grid = f.grid();
  auto avg = [&](const DyadicCube& q) {
    double s = 0.0;
    std::int64_t count = 0;
    for (std::int64_t c = 0; c < grid.cell_count(); ++c)
      if (grid.cube_of_cell(c, q.level) == q) {
        s += std::abs(f.values()(0, c));
        ++count;
      }
    return s / static_cast<double>(count);
  };
  out.push_back(q0);
  const double a0 = avg(q0);
  if (a0 <= 0.0) return;
  std::vector<DyadicCube> stack;
  for (auto& c : q0.children())
    if (c.level <= grid.depth()) stack.push_back(c);
  while (!stack.empty()) {
    const DyadicCube q = stack.back();
    stack.pop_back();
    if (avg(q) > 2.0 * a0) {
      classical_stopping(f, q, out);
    } else if (q.level < grid.depth()) {
      for (auto& c : q.children()) stack.push_back(c);
    }
  }
}

// 4. Scalar collapse.
CriterionResult scalar_collapse(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x4000);
  return run_criterion(4, "scalar_collapse", sc.count(50, 6), 1e-12, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int d = 1 + i % 2;
    const int depth = d == 1 ? 3 + static_cast<int>(rng.below(4)) : 2 + static_cast<int>(rng.below(2));
    const DyadicGrid grid(d, depth);
    const double p = random_p(rng);
    const double pd = mw::dual_exponent(p);
    const MatrixWeight w = random_weight(grid, 1, rng);
    const CubeCollection all = mw::all_cubes(grid, 0, depth);
    const mw::ApReport ap = mw::ap_constant(LpWSpace{p, w}, all);
    double sup = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
      const DyadicCube& q = all.cubes()[k];
      double sw = 0.0, sv = 0.0, mw_ = 0.0, mv = 0.0, cnt = 0.0;
      for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
        if (!(grid.cube_of_cell(c, q.level) == q)) continue;
        const double x = w.at(c)(0, 0);
        if (!std::isinf(p)) sw += std::pow(x, p);
        if (!std::isinf(pd)) sv += std::pow(1.0 / x, pd);
        mw_ = std::max(mw_, x);
        mv = std::max(mv, 1.0 / x);
        cnt += 1.0;
      }
      const double a = std::isinf(p) ? mw_ : std::pow(sw / cnt, 1.0 / p);
      const double b = std::isinf(pd) ? mv : std::pow(sv / cnt, 1.0 / pd);
      const double oracle = a * b;
      sup = std::max(sup, oracle);
      const double err = std::abs(ap.rows[k].value - oracle) / oracle;
      inst.metric = std::max(inst.metric, err);
    }
    inst.check(inst.metric <= 1e-12, "scalar A_p mismatch " + fmt_short(inst.metric));
    inst.check(std::abs(ap.sup - sup) <= 1e-12 * sup, "scalar sup mismatch");

    Mat vals(1, grid.cell_count());
    for (std::int64_t c = 0; c < grid.cell_count(); ++c)
      vals(0, c) = rng.uniform() < 0.2 ? 0.0 : std::exp(1.5 * rng.normal());
    const VectorField f(grid, vals);
    const mw::StoppingTree tree = mw::sparse_dominate(mw::kf(f), all);
    std::vector<DyadicCube> oracle;
    classical_stopping(f, mw::unit_cube(d), oracle);
    const CubeCollection expected(grid, oracle);
    inst.check(expected.cubes() == tree.selected.cubes(), "stopping cubes differ from the classical construction");
    inst.measured.push_back({"stopping_cubes", static_cast<double>(tree.selected.size())});
  });
}

// 5. Hölder and its extremizer.
CriterionResult duality(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x5000);
  return run_criterion(5, "duality", sc.count(1000, 50), 1e-9, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const DyadicGrid grid(1, 2 + static_cast<int>(rng.below(3)));
    const double p = i % 5 == 0 ? random_p(rng) : 1.0 + std::exp(rng.normal());
    const LpWSpace s{p, random_weight(grid, n, rng)};
    const VectorField f = mw::random_vector_field(grid, n, rng);
    const VectorField g = mw::random_vector_field(grid, n, rng);
    const double lhs = mw::pairing(f, g);
    const double rhs = mw::lp_norm(f, s) * mw::lp_norm(g, s.dual());
    inst.check(lhs <= rhs, "Hölder violated: " + fmt_short(lhs) + " > " + fmt_short(rhs));
    if (p > 1.0 && !std::isinf(p)) {
      const VectorField h = mw::holder_extremizer(f, s);
      const double a = mw::pairing(f, h);
      const double b = mw::lp_norm(f, s) * mw::lp_norm(h, s.dual());
      inst.metric = std::abs(a - b) / b;
      inst.check(inst.metric <= 1e-9, "extremizer misses equality by " + fmt_short(inst.metric));
    }
  });
}

double restricted_norm(const VectorField& f, const LpWSpace& s, const DyadicCube& q) {
  std::vector<double> h(static_cast<std::size_t>(f.cells()), 0.0);
  const std::int64_t first = f.grid().first_cell(q);
  for (std::int64_t c = first; c < first + f.grid().cell_span(q); ++c) h[c] = (s.w.at(c) * f.at(c)).norm();
  return mw::scalar_norm(h, s.p, f.grid(), q);
}

// 6. Property G and A_strong against A.
CriterionResult property_g(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x6000);
  return run_criterion(6, "property_g_strong", sc.count(200, 12), 1.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const int d = 1 + (i / 3) % 2;
    const DyadicGrid grid(d, d == 1 ? 3 : 2);
    static const double ps[] = {1.5, 2.0, 3.0};
    const LpWSpace s{ps[rng.below(3)], random_weight(grid, n, rng)};
    const LpWSpace sd = s.dual();
    const CubeCollection part = random_partition(grid, rng);
    const VectorField f = mw::random_vector_field(grid, n, rng);
    const VectorField g = mw::random_vector_field(grid, n, rng);
    double sum = 0.0;
    for (const auto& q : part.cubes()) sum += restricted_norm(f, s, q) * restricted_norm(g, sd, q);
    const double whole = mw::lp_norm(f, s) * mw::lp_norm(g, sd);
    inst.check(sum <= whole * (1.0 + 1e-12), "property G sum exceeds the product");
    const mw::StrongReport strong = mw::a_strong_constant(s, {part}, 4, rng.next_u64());
    const mw::ApReport ap = mw::ap_constant(s, mw::all_cubes(grid, 0, grid.depth()));
    inst.metric = std::max(sum / whole, strong.lower / ap.bracket_hi);
    inst.check(strong.lower <= ap.bracket_hi * (1.0 + 1e-12), "A_strong lower bound " + fmt_short(strong.lower) +
                                                  " above A upper bracket " + fmt_short(ap.bracket_hi));
    inst.measured.push_back({"strong_lower", strong.lower});
    inst.measured.push_back({"ap_bracket_hi", ap.bracket_hi});
  });
}

// 7. Rubio de Francia iteration.
CriterionResult rubio_de_francia(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x7000);
  const int k_trunc = 20;
  return run_criterion(7, "rubio_de_francia", sc.count(100, 6), 2.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 2;
    const int d = i % 5 == 4 ? 2 : 1;
    const DyadicGrid grid(d, d == 1 ? 2 + static_cast<int>(rng.below(3)) : 2);
    static const double ps[] = {1.5, 2.0, 3.0};
    const LpWSpace s{ps[rng.below(3)], random_weight(grid, n, rng)};
    const CubeCollection all = mw::all_cubes(grid, 0, grid.depth());
    const ConvexField f = mw::random_convex_field(grid, n, 2, 0.2, rng);
    const double m_hat = 4.0 * std::max(1.0, mw::maximal_norm_probe(s, all, 2, rng.next_u64()));
    const mw::RdfResult r = mw::rdf(f, all, s, k_trunc, m_hat);
    const double nf = mw::body_norm(f, s);
    const double nr = mw::body_norm(r.field, s);
    inst.metric = nf == 0.0 ? 0.0 : nr / nf;
    inst.check(nr <= 2.0 * nf + 1e-9, "norm of R_K F exceeds 2 norm F: " + fmt_short(inst.metric));
    const ConvexField mr = mw::maximal(r.field, all);
    const double deflate = 1.0 - std::ldexp(1.0, -k_trunc);
    for (std::int64_t c = 0; c < f.cells(); ++c) {
      inst.check(mw::contains_body(f.at(c), r.field.at(c), 1e-12), "F not inside R_K F at cell " + std::to_string(c));
      inst.check(mw::contains_body(mr.at(c).scaled(deflate), r.field.at(c).scaled(2.0 * r.m_hat)),
                 "self-improvement fails at cell " + std::to_string(c));
    }
    inst.measured.push_back({"norm_ratio", inst.metric});
    inst.measured.push_back({"m_hat", r.m_hat});
  });
}

// 8. Extrapolation certificate and interpolation endpoints.
CriterionResult extrapolation(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x8000);
  const int runs = sc.count(100, 8);
  const int endpoints = sc.count(20, 4);
  return run_criterion(8, "extrapolation_certificate", runs + endpoints, 2.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    if (i >= runs) {
      const int n = 2 + i % 2;
      const DyadicGrid grid(1, 2);
      auto full_rank = [&] {
        std::vector<ConvexBody> cells;
        for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
          Mat pts(n, n + 1);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b <= n; ++b) pts(a, b) = rng.normal();
          cells.push_back(ConvexBody::from_points(pts));
        }
        return ConvexField(grid, n, cells);
      };
      const ConvexField f0 = full_rank();
      const ConvexField f1 = full_rank();
      const mw::NormFunction r1 = mw::interpolate_norm(f0, f1, 1.0);
      const mw::NormFunction rinf = mw::interpolate_norm(f0, f1, INFINITY);
      const Mat& dirs = mw::direction_grid(n);
      double err = 0.0;
      for (std::int64_t c = 0; c < grid.cell_count(); ++c)
        for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
          const Vec u = dirs.col(j);
          const double h1 = f1.at(c).support(u);
          const double g0 = f0.at(c).gauge(u);
          err = std::max(err, std::abs(r1.rho(c, u) - h1) / h1);
          err = std::max(err, std::abs(rinf.rho(c, u) - g0) / g0);
        }
      inst.check(err <= 1e-10, "endpoint collapse off by " + fmt_short(err));
      return;
    }
    static const double ps[] = {1.0, 2.0, 3.0, INFINITY};
    static const double p0s[] = {1.5, 2.0, 3.0};
    const double p = ps[i % 4];
    const int n = 1 + (i / 4) % 2;
    const DyadicGrid grid(1, 2 + static_cast<int>(rng.below(2)));
    const LpWSpace x{p0s[rng.below(3)], random_weight(grid, n, rng)};
    const VectorField f = mw::random_vector_field(grid, n, rng);
    const VectorField g = mw::random_vector_field(grid, n, rng);
    const CubeCollection all = mw::all_cubes(grid, 0, grid.depth());
    mw::ExtrapolationOptions eo;
    eo.k_trunc = 10;
    eo.probe_trials = 2;
    eo.seed = rng.next_u64();
    const mw::ExtrapolationCertificate cert = mw::construct_weight(f, g, x, all, p, eo);
    inst.metric = cert.product_lhs / cert.product_rhs;
    inst.check(cert.product_holds, "product bound fails: ratio " + fmt_short(inst.metric));
    inst.check(cert.selection_holds, "f leaves F0: gauge " + fmt_short(cert.max_selection_gauge));
    std::vector<DyadicCube> sparse{mw::unit_cube(1), mw::unit_cube(1).children().front()};
    const mw::TransferDemo demo = mw::sparse_transfer_demo(cert, CubeCollection(grid, sparse));
    inst.check(demo.holds, "sparse transfer demo fails");
    inst.measured.push_back({"product_ratio", inst.metric});
    inst.measured.push_back({"ap_ratio", cert.ap_ratio});
  });
}

// 9. Weak-type chain.
CriterionResult weak_chain(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0x9000);
  return run_criterion(9, "weak_type_chain", sc.count(24, 4), 1.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 2;
    const int d = 1 + (i / 2) % 2;
    const DyadicGrid grid(d, d == 1 ? 3 + static_cast<int>(rng.below(2)) : 2);
    const LpWSpace s{2.0, random_weight(grid, n, rng)};
    const CubeCollection all = mw::all_cubes(grid, 0, grid.depth());
    const mw::ApReport ap = mw::ap_constant(s, all);
    std::vector<int> order(ap.rows.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ap.rows[a].value > ap.rows[b].value; });
    std::vector<VectorField> extra;
    for (std::size_t k = 0; k < std::min<std::size_t>(2, order.size()); ++k)
      extra.push_back(mw::cube_norm(s, ap.rows[order[k]].cube).witness);
    const mw::WeakReport weak = mw::weak_maximal_norm(s, all, 4, rng.next_u64(), extra);
    std::vector<CubeCollection> levels;
    for (int j = 0; j <= grid.depth(); ++j) levels.push_back(mw::all_cubes(grid, j, j));
    const mw::StrongReport strong = mw::a_strong_constant(s, levels, 2, rng.next_u64());
    const double envelope = 10.0 * n * std::pow(3.0, d);
    inst.metric = std::max(ap.sup / (weak.ratio * (1.0 + 1e-9)), weak.ratio / (envelope * strong.upper));
    inst.check(ap.sup <= weak.ratio * (1.0 + 1e-9),
               "[W]_p " + fmt_short(ap.sup) + " above weak norm " + fmt_short(weak.ratio));
    inst.check(weak.ratio <= envelope * strong.upper, "weak norm above the A_strong envelope");
    inst.measured.push_back({"weak_over_ap", weak.ratio / ap.sup});
  });
}

// 10. Pairwise disjoint transfer.
CriterionResult disjoint_transfer(const SuiteOptions& opt, const Scale& sc, std::vector<Measurement>& meas) {
  const CounterRng base(opt.seed ^ 0xA000);
  return run_criterion(10, "disjoint_transfer", sc.count(100, 10), 1.0, opt.jobs, meas, [&](int i, Instance& inst) {
    CounterRng rng = base.substream(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const int d = 1 + (i / 3) % 2;
    const DyadicGrid grid(d, d == 1 ? 3 : 2);
    const LpWSpace s{random_p(rng), random_weight(grid, n, rng)};
    const CubeCollection part = random_partition(grid, rng);
    const ConvexField f = mw::random_convex_field(grid, n, 2, 0.1, rng);
    const double lhs = mw::body_norm(mw::t_disjoint(f, part), s);
    const mw::OperatorReport op =
        mw::operator_norm_estimate(mw::AveragingOperator::disjoint(part), s, mw::NormMode::Probe, 2, rng.next_u64());
    const double rhs = std::pow(static_cast<double>(n), 1.5) * op.bracket_hi * mw::body_norm(f, s);
    inst.metric = rhs == 0.0 ? 0.0 : lhs / rhs;
    inst.check(lhs <= rhs * (1.0 + 1e-9), "transfer bound fails: ratio " + fmt_short(inst.metric));
    inst.measured.push_back({"transfer_ratio", inst.metric});
  });
}

std::string criteria_csv(const SuiteResult& r) {
  std::ostringstream s;
  write_suite_csv(s, r);
  write_measurements_csv(s, r);
  return s.str();
}

SuiteResult run_once(const SuiteOptions& opt, const ProgressFn& progress) {
  if (opt.name != "acceptance" && opt.name != "smoke") throw mw::InputError("unknown suite: " + opt.name);
  const Scale sc{opt.name == "smoke"};
  SuiteResult r;
  using Fn = CriterionResult (*)(const SuiteOptions&, const Scale&, std::vector<Measurement>&);
  const Fn all[] = {sparse_domination, john_sandwich, constant_weight, scalar_collapse, duality,
                    property_g,        rubio_de_francia, extrapolation,  weak_chain,      disjoint_transfer};
  for (Fn fn : all) {
    r.criteria.push_back(fn(opt, sc, r.measurements));
    if (progress) progress(r.criteria.back());
  }
  return r;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

SuiteResult run_suite(const SuiteOptions& opt, const ProgressFn& progress) {
  SuiteResult first = run_once(opt, progress);
  if (!opt.determinism) return first;
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult second = run_once(opt, {});
  CriterionResult det;
  det.id = 11;
  det.name = "determinism";
  det.instances = 2;
  const std::string a = criteria_csv(first);
  const std::string b = criteria_csv(second);
  det.passed = a == b;
  if (!det.passed) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    det.detail = "outputs differ at byte " + std::to_string(k);
    det.metric = 1.0;
  }
  det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  first.criteria.push_back(det);
  if (progress) progress(det);
  return first;
}

void write_suite_csv(std::ostream& out, const SuiteResult& r) {
  CsvWriter w(out, {"criterion", "name", "passed", "instances", "metric", "bound", "detail"});
  for (const auto& c : r.criteria) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    w << c.id << c.name << c.passed << c.instances << c.metric << c.bound << detail;
    w.end_row();
  }
}

void write_measurements_csv(std::ostream& out, const SuiteResult& r) {
  CsvWriter w(out, {"criterion", "instance", "quantity", "value"});
  for (const auto& m : r.measurements) {
    w << m.criterion << m.instance << m.quantity << m.value;
    w.end_row();
  }
}

}  // namespace mwcli
