#pragma once

#include "mwcli/config.hpp"

#include <mw/fields.hpp>
#include <mw/spaces.hpp>

namespace mwcli {

/// Instance described by a config: grid, weight, space and random fields.
struct Experiment {
  mw::DyadicGrid grid;
  int n = 2;
  double p = 2.0;
  std::uint64_t seed = 0;
  int trials = 16;
  int jobs = 1;
  mw::MatrixWeight weight;

  mw::LpWSpace space() const { return mw::LpWSpace{p, weight}; }
};

/// Keys: d, L, n, p, seed, trials, weight (constant|power|rotating|random|file),
/// weight.matrix, weight.exponent, weight.axis, weight.omega, weight.lambda,
/// weight.spread, weight.file.
Experiment make_experiment(const Config& cfg);

mw::WeightSpec weight_spec(const Config& cfg, int n, std::uint64_t seed);

/// Keys: field (random|unit|file), field.points, field.zero_prob, field.file.
mw::ConvexField make_field(const Config& cfg, const Experiment& e);
/// Keys: vector.file; otherwise a seeded random field.
mw::VectorField make_vector_field(const Config& cfg, const Experiment& e, std::uint64_t stream);

}  // namespace mwcli
