#include "mwcli/commands.hpp"

#include "mwcli/csv.hpp"
#include "mwcli/experiment.hpp"
#include "mwcli/suite.hpp"

#include <mw/body_io.hpp>
#include <mw/errors.hpp>
#include <mw/extrapolation.hpp>
#include <mw/muckenhoupt.hpp>
#include <mw/sparse.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace mwcli {
namespace {

std::ofstream open_output(const CommandContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  const std::string path = (std::filesystem::path(ctx.out_dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::ostream& log(const CommandContext& ctx) {
  static std::ostream null(nullptr);
  return ctx.log ? *ctx.log : null;
}

int verdict(const CommandContext& ctx, bool ok, const std::string& what) {
  if (ok) return kExitOk;
  log(ctx) << "FAIL " << what << '\n';
  return kExitFailure;
}

std::vector<std::string> cube_header(int d) {
  std::vector<std::string> h{"cube_level"};
  for (int i = 1; i <= d; ++i) h.push_back("cube_corner_" + std::to_string(i));
  return h;
}

}  // namespace

int cmd_gen(const CommandContext& ctx) {
  const Experiment e = make_experiment(ctx.config);
  {
    auto out = open_output(ctx, "weight.txt");
    mw::write_weight(out, e.weight);
  }
  {
    auto out = open_output(ctx, "field.txt");
    mw::write_convex_field(out, make_field(ctx.config, e));
  }
  {
    auto out = open_output(ctx, "vector.txt");
    mw::write_vector_field(out, make_vector_field(ctx.config, e, 0));
  }
  log(ctx) << "wrote weight.txt field.txt vector.txt (" << e.grid.cell_count() << " cells)\n";
  return kExitOk;
}

int cmd_ap(const CommandContext& ctx) {
  const Experiment e = make_experiment(ctx.config);
  const double eps = ctx.config.real("eps", 1e-6);
  const mw::LpWSpace s = e.space();
  const mw::ApReport rep = mw::ap_constant(s, mw::all_cubes(e.grid, 0, e.grid.depth()), eps, e.jobs);
  auto out = open_output(ctx, "ap.csv");
  std::vector<std::string> header = cube_header(e.grid.d());
  for (const char* col : {"value", "upper", "witness_constant"}) header.push_back(col);
  for (int i = 1; i <= e.n; ++i) header.push_back("u_" + std::to_string(i));
  for (int i = 1; i <= e.n; ++i) header.push_back("v_" + std::to_string(i));
  CsvWriter w(out, header);
  bool ok = true;
  for (const auto& row : rep.rows) {
    w << row.cube.level;
    for (auto c : row.cube.corner) w << static_cast<long long>(c);
    w << row.value << row.upper << row.witness_constant;
    for (int i = 0; i < e.n; ++i) w << row.u(i);
    for (int i = 0; i < e.n; ++i) w << row.v(i);
    w.end_row();
    ok = ok && row.witness_constant <= row.upper * (1.0 + 1e-9);
  }
  auto summary = open_output(ctx, "ap_summary.csv");
  CsvWriter sw(summary, {"p", "n", "d", "L", "sup", "bracket_lo", "bracket_hi"});
  sw << e.p << e.n << e.grid.d() << e.grid.depth() << rep.sup << rep.bracket_lo << rep.bracket_hi;
  sw.end_row();
  log(ctx) << "[W]_A = " << fmt(rep.sup) << " in [" << fmt(rep.bracket_lo) << ", " << fmt(rep.bracket_hi) << "]\n";
  return verdict(ctx, ok, "ap witness exceeds its bracket");
}

int cmd_maximal(const CommandContext& ctx) {
  const Experiment e = make_experiment(ctx.config);
  const mw::LpWSpace s = e.space();
  const mw::ConvexField f = make_field(ctx.config, e);
  const mw::CubeCollection all = mw::all_cubes(e.grid, 0, e.grid.depth());
  const mw::ConvexField mf = mw::maximal(f, all, mw::kVertexCap, e.jobs);
  bool ok = true;
  for (const auto& q : all.cubes()) {
    const mw::ConvexBody avg = mw::aumann_average(f, q);
    const std::int64_t first = e.grid.first_cell(q);
    for (std::int64_t c = first; c < first + e.grid.cell_span(q); ++c) ok = ok && mw::contains_body(avg, mf.at(c));
  }
  {
    auto out = open_output(ctx, "maximal.txt");
    mw::write_convex_field(out, mf);
  }
  auto out = open_output(ctx, "operators.csv");
  CsvWriter w(out, {"op", "space", "p", "norm_estimate", "bracket_lo", "bracket_hi", "trials", "seed"});
  auto row = [&](const mw::OperatorReport& r) {
    w << r.op << r.space << r.p << r.norm_estimate << r.bracket_lo << r.bracket_hi << r.trials
      << static_cast<unsigned long long>(r.seed);
    w.end_row();
  };
  const mw::DyadicCube root = mw::unit_cube(e.grid.d());
  row(mw::operator_norm_estimate(mw::AveragingOperator::cube(e.grid, root), s, mw::NormMode::ExactSmall));
  if (e.grid.depth() > 0) {
    const mw::CubeCollection level1 = mw::all_cubes(e.grid, 1, 1);
    row(mw::operator_norm_estimate(mw::AveragingOperator::disjoint(level1), s, mw::NormMode::Probe, e.trials, e.seed));
    const mw::CubeCollection sparse(e.grid, {root, root.children().front()});
    row(mw::operator_norm_estimate(mw::AveragingOperator::sparse(sparse), s, mw::NormMode::Probe, e.trials, e.seed));
  }
  mw::OperatorReport m;
  m.op = "M";
  m.space = "LpW[K]";
  m.p = e.p;
  m.norm_estimate = m.bracket_lo = mw::maximal_norm_probe(s, all, e.trials, e.seed);
  m.trials = e.trials;
  m.seed = e.seed;
  row(m);
  log(ctx) << "maximal operator probe ratio " << fmt(m.norm_estimate) << '\n';
  return verdict(ctx, ok, "an average is not contained in the maximal function");
}

int cmd_sparse(const CommandContext& ctx) {
  const Experiment e = make_experiment(ctx.config);
  const mw::ConvexField f = make_field(ctx.config, e);
  const mw::CubeCollection fam = mw::all_cubes(e.grid, 0, e.grid.depth());
  const mw::StoppingTree tree = mw::sparse_dominate(f, fam, ctx.config.real("eps", 1e-6));
  const mw::DominationReport rep = mw::verify_domination(f, fam, tree, ctx.config.real("tol", 1e-7), e.jobs);
  {
    auto out = open_output(ctx, "selected.txt");
    mw::write_collection(out, tree.selected);
  }
  {
    auto out = open_output(ctx, "tree.txt");
    mw::write_tree(out, tree);
  }
  auto out = open_output(ctx, "sparse.csv");
  CsvWriter w(out, {"n", "d", "L", "family", "selected", "measured_factor", "constant", "worst_cell", "sparse",
                    "packing", "between", "intermediate", "holds"});
  w << e.n << e.grid.d() << e.grid.depth() << static_cast<unsigned long long>(fam.size())
    << static_cast<unsigned long long>(tree.selected.size()) << rep.measured_factor << rep.constant
    << static_cast<long long>(rep.worst_cell) << rep.sparse << rep.packing << rep.between << rep.intermediate
    << rep.holds;
  w.end_row();
  log(ctx) << tree.selected.size() << " stopping cubes, measured factor " << fmt(rep.measured_factor) << " <= "
           << fmt(rep.constant) << '\n';
  return verdict(ctx, rep.holds && rep.between && rep.intermediate, "sparse domination");
}

int cmd_extrapolate(const CommandContext& ctx) {
  const Experiment e = make_experiment(ctx.config);
  const mw::VectorField f = make_vector_field(ctx.config, e, 1);
  const mw::VectorField g = make_vector_field(ctx.config, e, 2);
  const mw::CubeCollection all = mw::all_cubes(e.grid, 0, e.grid.depth());
  mw::ExtrapolationOptions opt;
  opt.k_trunc = ctx.config.integer("K", 12);
  opt.m_hat = ctx.config.real("m_hat", 0.0);
  opt.m_hat_dual = ctx.config.real("m_hat_dual", 0.0);
  opt.inflation = ctx.config.real("inflation", 4.0);
  opt.probe_trials = e.trials;
  opt.seed = e.seed;
  opt.eps = ctx.config.real("eps", 1e-6);
  opt.jobs = e.jobs;
  const double q = ctx.config.real("q", 2.0);
  const mw::ExtrapolationCertificate cert = mw::construct_weight(f, g, e.space(), all, q, opt);
  const mw::CubeCollection sparse(e.grid, {mw::unit_cube(e.grid.d())});
  const mw::TransferDemo demo = mw::sparse_transfer_demo(cert, sparse);
  auto out = open_output(ctx, "certificate.csv");
  CsvWriter w(out, {"q", "p0", "k_trunc", "m_hat", "m_hat_dual", "product_lhs", "product_rhs", "ap_of_rho",
                    "ap_ratio", "max_selection_gauge", "product_holds", "selection_holds", "demo_pairing",
                    "demo_holder_bound", "demo_transferred", "demo_holds"});
  w << cert.p << e.p << cert.k_trunc << cert.m_hat << cert.m_hat_dual << cert.product_lhs << cert.product_rhs
    << cert.ap_of_rho << cert.ap_ratio << cert.max_selection_gauge << cert.product_holds << cert.selection_holds
    << demo.pairing << demo.holder_bound << demo.transferred << demo.holds;
  w.end_row();
  {
    auto txt = open_output(ctx, "certificate.txt");
    txt << "q " << fmt(cert.p) << '\n'
        << "product_lhs " << fmt(cert.product_lhs) << '\n'
        << "product_rhs " << fmt(cert.product_rhs) << '\n'
        << "ratio " << fmt(cert.product_lhs / cert.product_rhs) << '\n'
        << "m_hat " << fmt(cert.m_hat) << '\n'
        << "m_hat_dual " << fmt(cert.m_hat_dual) << '\n'
        << "ap_of_rho " << fmt(cert.ap_of_rho) << '\n'
        << "ap_ratio " << fmt(cert.ap_ratio) << '\n';
  }
  {
    auto balls = open_output(ctx, "rho.txt");
    balls << "normfunction " << e.grid.d() << ' ' << e.grid.depth() << ' ' << e.n << '\n';
    for (std::int64_t c = 0; c < cert.rho.cells(); ++c) mw::write_body(balls, cert.rho.ball(c));
  }
  log(ctx) << "product ratio " << fmt(cert.product_lhs / cert.product_rhs) << " (bound 2)\n";
  return verdict(ctx, cert.product_holds && cert.selection_holds && demo.holds, "extrapolation certificate");
}

int cmd_verify(const CommandContext& ctx) {
  SuiteOptions opt;
  opt.name = ctx.config.str("suite", "acceptance");
  opt.seed = ctx.config.u64("seed", 7);
  opt.jobs = std::max(1, ctx.config.integer("jobs", 1));
  opt.determinism = ctx.config.integer("determinism", 0) != 0;
  SuiteResult r;
  try {
    r = run_suite(opt, [&](const CriterionResult& c) {
      log(ctx) << (c.passed ? "PASS" : "FAIL") << " criterion " << c.id << ' ' << c.name << " (" << c.instances
               << " instances, worst " << fmt(c.metric) << " vs " << fmt(c.bound) << ")"
               << (c.detail.empty() ? "" : " " + c.detail) << '\n';
    });
  } catch (const mw::InputError& err) {
    throw ConfigError(err.what());
  }
  {
    auto out = open_output(ctx, "verify.csv");
    write_suite_csv(out, r);
  }
  {
    auto out = open_output(ctx, "measurements.csv");
    write_measurements_csv(out, r);
  }
  return r.passed() ? kExitOk : kExitFailure;
}

}  // namespace mwcli
