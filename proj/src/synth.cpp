#include "celliptic/synth.hpp"

#include "celliptic/error.hpp"
#include "celliptic/multi_index.hpp"

#include <cmath>
#include <random>

namespace celliptic {

using Eigen::VectorXd;

namespace {

VectorXd param_vector(const nlohmann::json &params, const char *key, const VectorXd &fallback) {
  if (!params.contains(key))
    return fallback;
  const auto &j = params[key];
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != fallback.size())
    throw ParseError(std::string("synth parameter '") + key + "' must be an array of length n");
  VectorXd v(fallback.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError(std::string("synth parameter '") + key + "' must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

double param_number(const nlohmann::json &params, const char *key, double fallback) {
  if (!params.contains(key))
    return fallback;
  if (!params[key].is_number())
    throw ParseError(std::string("synth parameter '") + key + "' must be a number");
  return params[key].get<double>();
}

} // namespace

std::vector<std::string> synth_kinds() {
  return {"smooth", "indicator_halfplane", "indicator_halfdisk", "cone_abs", "polynomial"};
}

GridFunction synthesize_test_function(const SynthSpec &spec) {
  const int n = spec.n;
  if (n < 1)
    throw InvariantError("synth dimension must be positive");
  if (!(spec.hi > spec.lo) || !(spec.h > 0.0))
    throw InvariantError("synth box needs lo < hi and h > 0");
  if (!spec.params.is_object())
    throw ParseError("synth params must be a JSON object");
  const VectorXd lo = VectorXd::Constant(n, spec.lo);
  const VectorXd hi = VectorXd::Constant(n, spec.hi);
  const auto &p = spec.params;

  if (spec.kind == "smooth") {
    const int terms = static_cast<int>(param_number(p, "terms", 3));
    const int dim = static_cast<int>(param_number(p, "dim", 1));
    if (terms < 1 || dim < 1)
      throw InvariantError("smooth synth needs terms >= 1 and dim >= 1");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::MatrixXd freq(n, terms * dim), amp(dim, terms), phase(dim, terms);
    for (Eigen::Index i = 0; i < freq.size(); ++i)
      freq.data()[i] = 2.0 * unit(rng);
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
      amp.data()[i] = unit(rng);
      phase.data()[i] = 3.0 * unit(rng);
    }
    return GridFunction::sample(lo, hi, spec.h, dim, [&](const VectorXd &x) {
      VectorXd v = VectorXd::Zero(dim);
      for (int c = 0; c < dim; ++c)
        for (int t = 0; t < terms; ++t)
          v(c) += amp(c, t) * std::sin(freq.col(c * terms + t).dot(x) + phase(c, t));
      return v;
    });
  }
  if (spec.kind == "indicator_halfplane") {
    VectorXd e1 = VectorXd::Zero(n);
    e1(0) = 1.0;
    const VectorXd normal = param_vector(p, "normal", e1);
    const double offset = param_number(p, "offset", 0.0);
    return GridFunction::sample(lo, hi, spec.h, 1, [&](const VectorXd &x) {
      return VectorXd::Constant(1, normal.dot(x) > offset ? 1.0 : 0.0);
    });
  }
  if (spec.kind == "indicator_halfdisk") {
    const VectorXd center = param_vector(p, "center", VectorXd::Zero(n));
    const double radius = param_number(p, "radius", 1.0);
    const int axis = static_cast<int>(param_number(p, "axis", n - 1));
    if (axis < 0 || axis >= n)
      throw InvariantError("halfdisk axis out of range");
    return GridFunction::sample(lo, hi, spec.h, 1, [&](const VectorXd &x) {
      const bool inside = (x - center).norm() < radius && x(axis) > center(axis);
      return VectorXd::Constant(1, inside ? 1.0 : 0.0);
    });
  }
  if (spec.kind == "cone_abs") {
    const VectorXd center = param_vector(p, "center", VectorXd::Zero(n));
    int multiply = -1;
    if (p.contains("multiply")) {
      multiply = static_cast<int>(param_number(p, "multiply", -1));
      if (multiply < 0 || multiply >= n)
        throw InvariantError("cone_abs multiply index out of range");
    }
    return GridFunction::sample(lo, hi, spec.h, 1, [&](const VectorXd &x) {
      double v = (x - center).norm();
      if (multiply >= 0)
        v *= x(multiply);
      return VectorXd::Constant(1, v);
    });
  }
  if (spec.kind == "polynomial") {
    if (!p.contains("terms") || !p["terms"].is_array() || p["terms"].empty())
      throw ParseError("polynomial synth needs a nonempty 'terms' array");
    std::vector<std::pair<MultiIndex, VectorXd>> terms;
    int dim = -1;
    for (const auto &t : p["terms"]) {
      if (!t.is_object() || !t.contains("alpha") || !t.contains("w"))
        throw ParseError("polynomial term needs alpha and w");
      MultiIndex alpha;
      for (const auto &a : t["alpha"]) {
        if (!a.is_number_integer() || a.get<int>() < 0)
          throw ParseError("alpha entries must be nonnegative integers");
        alpha.push_back(a.get<int>());
      }
      if (static_cast<int>(alpha.size()) != n)
        throw ParseError("alpha length must equal n");
      std::vector<double> w;
      for (const auto &c : t["w"]) {
        if (!c.is_number())
          throw ParseError("w entries must be numbers");
        w.push_back(c.get<double>());
      }
      if (dim < 0)
        dim = static_cast<int>(w.size());
      if (w.empty() || static_cast<int>(w.size()) != dim)
        throw ParseError("all terms need the same nonempty w length");
      terms.emplace_back(alpha, Eigen::Map<VectorXd>(w.data(), dim));
    }
    return GridFunction::sample(lo, hi, spec.h, dim, [&](const VectorXd &x) {
      VectorXd v = VectorXd::Zero(dim);
      for (const auto &[alpha, w] : terms) {
        double m = 1.0;
        for (int i = 0; i < n; ++i)
          for (int e = 0; e < alpha[i]; ++e)
            m *= x(i);
        v += m * w;
      }
      return v;
    });
  }
  throw ParseError("unknown synth kind: " + spec.kind);
}

} // namespace celliptic
