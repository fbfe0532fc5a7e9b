#pragma once

#include "celliptic/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace celliptic {

/// Analytic prototype sampled on the lattice of [lo, hi]^n with spacing h.
///
/// kinds and their params:
///   smooth               sum of `terms` (3) seeded sin(b.x + c) waves, `dim` (1) components
///   indicator_halfplane  1{normal . x > offset}; normal (e1), offset (0)
///   indicator_halfdisk   1{|x - center| < radius, x_axis > center_axis};
///                        center (0), radius (1), axis (last coordinate)
///   cone_abs             |x - center|, times x_multiply when `multiply` is given
///   polynomial           terms [{ "alpha": [...], "w": [...] }], dim from w
struct SynthSpec {
  std::string kind;
  int n = 2;
  double lo = -1.0;
  double hi = 1.0;
  double h = 1.0 / 64;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

/// Throws ParseError for an unknown kind or malformed params, InvariantError
/// for an invalid box.
GridFunction synthesize_test_function(const SynthSpec &spec);

std::vector<std::string> synth_kinds();

} // namespace celliptic
