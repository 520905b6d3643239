#include "mwcli/experiment.hpp"

#include <mw/errors.hpp>
#include <mw/operators.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace mwcli {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

}  // namespace

mw::WeightSpec weight_spec(const Config& cfg, int n, std::uint64_t seed) {
  mw::WeightSpec spec;
  spec.n = n;
  spec.seed = cfg.u64("weight.seed", seed);
  const std::string kind = cfg.str("weight", "constant");
  if (kind == "constant") {
    spec.kind = mw::WeightSpec::Kind::Constant;
    const auto m = cfg.reals("weight.matrix", {});
    if (m.empty()) {
      spec.a = mw::Mat::Identity(n, n);
    } else {
      if (static_cast<int>(m.size()) != n * n) throw ConfigError("weight.matrix needs n*n entries");
      spec.a = mw::Mat(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) spec.a(i, j) = m[static_cast<std::size_t>(i * n + j)];
    }
  } else if (kind == "power") {
    spec.kind = mw::WeightSpec::Kind::Power;
    spec.exponent = cfg.real("weight.exponent", 0.5);
    spec.axis = cfg.integer("weight.axis", 1);
  } else if (kind == "rotating") {
    spec.kind = mw::WeightSpec::Kind::Rotating;
    spec.omega = cfg.real("weight.omega", 2.0 * std::numbers::pi);
    std::vector<double> lambda = cfg.reals("weight.lambda", {});
    if (lambda.empty())
      for (int i = 0; i < n; ++i) lambda.push_back(1.0 + 3.0 * i);
    if (static_cast<int>(lambda.size()) != n) throw ConfigError("weight.lambda needs n entries");
    spec.lambda = Eigen::Map<const mw::Vec>(lambda.data(), n);
  } else if (kind == "random") {
    spec.kind = mw::WeightSpec::Kind::Random;
    spec.spread = cfg.real("weight.spread", 1.0);
  } else {
    throw ConfigError("unknown weight kind: " + kind);
  }
  return spec;
}

Experiment make_experiment(const Config& cfg) {
  Experiment e;
  const int d = cfg.integer("d", 1);
  const int depth = cfg.integer("L", 4);
  if (d < 1 || depth < 0 || d * depth > 24) throw ConfigError("grid must satisfy d >= 1, L >= 0, d*L <= 24");
  e.grid = mw::DyadicGrid(d, depth);
  e.n = cfg.integer("n", 2);
  if (e.n < 1) throw ConfigError("n must be positive");
  e.p = cfg.real("p", 2.0);
  if (!(e.p >= 1.0)) throw ConfigError("p must be >= 1");
  e.seed = cfg.u64("seed", 0);
  e.trials = cfg.integer("trials", 16);
  if (e.trials < 0) throw ConfigError("trials must be nonnegative");
  e.jobs = std::max(1, cfg.integer("jobs", 1));
  try {
    if (cfg.str("weight", "constant") == "file") {
      auto in = open_input(cfg.str("weight.file", "weight.txt"));
      e.weight = mw::read_weight(in);
      if (!(e.weight.grid() == e.grid) || e.weight.n() != e.n) throw ConfigError("weight file does not match d, L, n");
    } else {
      e.weight = mw::make_weight(weight_spec(cfg, e.n, e.seed), e.grid);
    }
  } catch (const mw::InputError& err) {
    throw ConfigError(std::string("weight: ") + err.what());
  }
  return e;
}

mw::ConvexField make_field(const Config& cfg, const Experiment& e) {
  const std::string kind = cfg.str("field", "random");
  if (kind == "file") {
    auto in = open_input(cfg.str("field.file", "field.txt"));
    mw::ConvexField f = mw::read_convex_field(in);
    if (!(f.grid() == e.grid) || f.n() != e.n) throw ConfigError("field file does not match d, L, n");
    return f;
  }
  if (kind == "unit") return mw::ConvexField::constant(e.grid, mw::ConvexBody::unit_ball(e.n).as_polytope());
  if (kind != "random") throw ConfigError("unknown field kind: " + kind);
  mw::CounterRng rng = mw::CounterRng(e.seed).substream(0xF1E1D);
  return mw::random_convex_field(e.grid, e.n, cfg.integer("field.points", 2), cfg.real("field.zero_prob", 0.1), rng);
}

mw::VectorField make_vector_field(const Config& cfg, const Experiment& e, std::uint64_t stream) {
  if (cfg.has("vector.file")) {
    auto in = open_input(cfg.str("vector.file", ""));
    mw::VectorField f = mw::read_vector_field(in);
    if (!(f.grid() == e.grid) || f.n() != e.n) throw ConfigError("vector file does not match d, L, n");
    return f;
  }
  mw::CounterRng rng = mw::CounterRng(e.seed).substream(0xFEC7 + stream);
  return mw::random_vector_field(e.grid, e.n, rng);
}

}  // namespace mwcli
