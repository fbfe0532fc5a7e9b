#include "celliptic/measures.hpp"

#include "celliptic/error.hpp"
#include "celliptic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace celliptic {

using Index = Eigen::Index;

DiscreteMeasure::DiscreteMeasure(int n, std::vector<Atom> atoms,
                                 std::shared_ptr<const GridFunction> density,
                                 std::vector<Region> window)
    : n_(n), atoms_(std::move(atoms)), density_(std::move(density)), window_(std::move(window)) {
  if (n_ < 1)
    throw InvariantError("measure dimension must be positive");
  for (const auto &a : atoms_) {
    if (a.x.size() != n_)
      throw InvariantError("atom location has the wrong dimension");
    if (!a.x.allFinite() || !a.w.allFinite())
      throw InvariantError("atom data must be finite");
  }
  for (const auto &r : window_) {
    r.require_valid();
    if (r.n() != n_)
      throw InvariantError("window region has the wrong dimension");
  }
  if (density_) {
    if (density_->n() != n_)
      throw InvariantError("density lattice has the wrong dimension");
    density_->require_valid();
    auto mass = std::make_shared<Eigen::VectorXd>(density_->values().colwise().norm().transpose() *
                                                  density_->cell_volume());
    cell_mass_ = std::move(mass);
  }
}

const Eigen::VectorXd &DiscreteMeasure::cell_mass() const {
  static const Eigen::VectorXd empty;
  return cell_mass_ ? *cell_mass_ : empty;
}

bool DiscreteMeasure::in_window(const Eigen::VectorXd &x) const {
  for (const auto &r : window_)
    if (!r.contains(x))
      return false;
  return true;
}

void DiscreteMeasure::for_each_cell(
    const Eigen::VectorXd &a, const Eigen::VectorXd &b,
    const std::function<void(Index, const Eigen::VectorXd &, double)> &f) const {
  if (!density_)
    return;
  Eigen::VectorXd lo = a, hi = b;
  for (const auto &r : window_) {
    const Eigen::VectorXd reach = Eigen::VectorXd::Constant(n_, r.radius);
    lo = lo.cwiseMax(r.center - reach);
    hi = hi.cwiseMin(r.center + reach);
  }
  if ((hi.array() < lo.array()).any())
    return;
  const Eigen::VectorXd &mass = *cell_mass_;
  density_->for_each_in_box(lo, hi, [&](Index linear, const Eigen::VectorXd &x) {
    if (mass(linear) == 0.0 || !in_window(x))
      return;
    f(linear, x, mass(linear));
  });
}

double DiscreteMeasure::total_variation() const {
  double total = 0.0;
  for (const auto &a : atoms_)
    total += a.w.norm();
  if (density_) {
    if (window_.empty()) {
      total += cell_mass_->sum();
    } else {
      const Eigen::VectorXd inf = Eigen::VectorXd::Constant(n_, std::numeric_limits<double>::infinity());
      for_each_cell(-inf, inf, [&](Index, const Eigen::VectorXd &, double m) { total += m; });
    }
  }
  return total;
}

DiscreteMeasure DiscreteMeasure::scaled(double a) const {
  std::vector<Atom> atoms = atoms_;
  for (auto &atom : atoms)
    atom.w *= a;
  std::shared_ptr<const GridFunction> density;
  if (density_) {
    auto copy = std::make_shared<GridFunction>(*density_);
    copy->values() *= a;
    density = std::move(copy);
  }
  return DiscreteMeasure(n_, std::move(atoms), std::move(density), window_);
}

DiscreteMeasure restrict(const DiscreteMeasure &mu, const Region &region) {
  region.require_valid();
  if (region.n() != mu.n())
    throw InvariantError("region and measure disagree in dimension");
  std::vector<Atom> atoms;
  for (const auto &a : mu.atoms())
    if (region.contains(a.x))
      atoms.push_back(a);
  std::vector<Region> window = mu.window();
  if (mu.density())
    window.push_back(region);
  return DiscreteMeasure(mu.n(), std::move(atoms), mu.density(), std::move(window));
}

double mass_in_ball(const DiscreteMeasure &mu, const Eigen::VectorXd &x0, double rho) {
  double total = 0.0;
  for (const auto &a : mu.atoms())
    if ((a.x - x0).norm() < rho)
      total += a.w.norm();
  const Eigen::VectorXd reach = Eigen::VectorXd::Constant(mu.n(), rho);
  mu.for_each_cell(x0 - reach, x0 + reach, [&](Index, const Eigen::VectorXd &y, double m) {
    if ((y - x0).norm() < rho)
      total += m;
  });
  return total;
}

double unit_cube_riesz_integral(int n, double s) {
  if (!(s > 0.0))
    throw InvariantError("Riesz order s must be positive");
  if (n == 1)
    return (2.0 / s) * std::pow(0.5, s);
  // Divergence theorem on the cube: (1/s) * sum over the 2n faces of
  // int |z|^{s-n} (z . nu), and z . nu = 1/2 on every face.
  const Rule1D rule = gauss_legendre(48);
  const int m = n - 1;
  const Index points = static_cast<Index>(std::pow(48, m));
  double face = 0.0;
  for (Index p = 0; p < points; ++p) {
    Index rest = p;
    double r2 = 0.25, w = 1.0;
    for (int i = 0; i < m; ++i) {
      const Index k = rest % 48;
      rest /= 48;
      const double t = 0.5 * rule.nodes(k);
      r2 += t * t;
      w *= 0.5 * rule.weights(k);
    }
    face += w * std::pow(r2, 0.5 * (s - n));
  }
  return (static_cast<double>(n) / s) * face;
}

PotentialValue riesz_potential(const DiscreteMeasure &mu, double s, const Eigen::VectorXd &x0) {
  if (!(s > 0.0))
    throw InvariantError("Riesz order s must be positive");
  if (x0.size() != mu.n())
    throw InvariantError("base point has the wrong dimension");
  const int n = mu.n();
  const double exponent = s - n;
  PotentialValue out;
  for (const auto &a : mu.atoms()) {
    const double w = a.w.norm();
    if (w == 0.0)
      continue;
    const double d = (a.x - x0).norm();
    if (d == 0.0) {
      if (exponent < 0.0) {
        out.infinite = true;
      } else if (exponent == 0.0) {
        out.value += w;
      }
      continue;
    }
    out.value += w * std::pow(d, exponent);
  }
  if (const auto &density = mu.density()) {
    const double h = density->h();
    Index singular = -1;
    {
      const auto idx = density->nearest(x0);
      bool inside = true;
      for (int i = 0; i < n; ++i)
        inside = inside && idx[i] >= 0 && idx[i] < density->shape()[i];
      if (inside)
        singular = density->linear_index(idx);
    }
    const double singular_factor = std::pow(h, exponent) * unit_cube_riesz_integral(n, s);
    const Eigen::VectorXd inf = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    double sum = 0.0;
    mu.for_each_cell(-inf, inf, [&](Index linear, const Eigen::VectorXd &y, double m) {
      if (linear == singular) {
        sum += m * singular_factor;
        return;
      }
      sum += m * std::pow((y - x0).norm(), exponent);
    });
    out.value += sum;
  }
  if (out.infinite)
    out.value = std::numeric_limits<double>::infinity();
  return out;
}

std::vector<double> dyadic_radii(double R, int levels) {
  if (!(R > 0.0) || levels < 1)
    throw InvariantError("radius ladder needs R > 0 and at least one level");
  std::vector<double> radii(levels);
  for (int j = 0; j < levels; ++j)
    radii[j] = std::ldexp(R, -j);
  return radii;
}

double fractional_maximal(const DiscreteMeasure &mu, int k, const Eigen::VectorXd &x0,
                          const std::vector<double> &radii) {
  if (radii.empty())
    throw InvariantError("fractional maximal function needs at least one radius");
  double rmax = 0.0;
  for (double r : radii) {
    if (!(r > 0.0))
      throw InvariantError("radii must be positive");
    rmax = std::max(rmax, r);
  }
  std::vector<std::pair<double, double>> hits;  // (distance, mass)
  for (const auto &a : mu.atoms()) {
    const double d = (a.x - x0).norm();
    if (d < rmax)
      hits.emplace_back(d, a.w.norm());
  }
  const Eigen::VectorXd reach = Eigen::VectorXd::Constant(mu.n(), rmax);
  mu.for_each_cell(x0 - reach, x0 + reach, [&](Index, const Eigen::VectorXd &y, double m) {
    const double d = (y - x0).norm();
    if (d < rmax)
      hits.emplace_back(d, m);
  });
  std::sort(hits.begin(), hits.end());
  std::vector<double> cumulative(hits.size() + 1, 0.0);
  for (std::size_t i = 0; i < hits.size(); ++i)
    cumulative[i + 1] = cumulative[i] + hits[i].second;
  double best = 0.0;
  for (double r : radii) {
    const auto end = std::lower_bound(hits.begin(), hits.end(), std::make_pair(r, -1.0));
    const double mass = cumulative[static_cast<std::size_t>(end - hits.begin())];
    best = std::max(best, mass / std::pow(r, mu.n() - k));
  }
  return best;
}

nlohmann::json region_to_json(const Region &region) {
  nlohmann::json j;
  j["kind"] = region.kind == Region::Kind::ball ? "ball" : "annulus";
  j["center"] = std::vector<double>(region.center.data(), region.center.data() + region.n());
  j["radius"] = region.radius;
  j["lambda"] = region.lambda;
  return j;
}

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json &j, const char *what) {
  if (!j.is_array())
    throw ParseError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError(std::string(what) + " must be an array of numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

} // namespace

Region region_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius"))
    throw ParseError("region needs center and radius");
  const std::string kind = j.value("kind", std::string("ball"));
  if (!j["radius"].is_number())
    throw ParseError("region radius must be a number");
  const Eigen::VectorXd c = vector_from_json(j["center"], "region center");
  const double r = j["radius"].get<double>();
  const double lambda = j.contains("lambda") ? j["lambda"].get<double>() : 0.0;
  Region region;
  if (kind == "ball")
    region = Region::ball(c, r);
  else if (kind == "annulus")
    region = Region::annulus(c, r, lambda);
  else
    throw ParseError("unknown region kind: " + kind);
  if (kind == "ball" && lambda != 0.0)
    throw ParseError("a ball region has lambda 0");
  return region;
}

nlohmann::json measure_to_json(const DiscreteMeasure &mu, const std::string &density_ref) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto &a : mu.atoms())
    j["atoms"].push_back({{"x", std::vector<double>(a.x.data(), a.x.data() + a.x.size())},
                          {"w", std::vector<double>(a.w.data(), a.w.data() + a.w.size())}});
  if (!density_ref.empty())
    j["density_ref"] = density_ref;
  if (!mu.window().empty()) {
    j["window"] = nlohmann::json::array();
    for (const auto &r : mu.window())
      j["window"].push_back(region_to_json(r));
  }
  return j;
}

DiscreteMeasure measure_from_json(const nlohmann::json &j, const std::string &base_dir) {
  if (!j.is_object())
    throw ParseError("measure must be a JSON object");
  std::vector<Atom> atoms;
  int n = 0;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array())
      throw ParseError("measure atoms must be an array");
    for (const auto &a : j["atoms"]) {
      if (!a.is_object() || !a.contains("x") || !a.contains("w"))
        throw ParseError("atom needs x and w");
      Atom atom{vector_from_json(a["x"], "atom x"), vector_from_json(a["w"], "atom w")};
      if (n == 0)
        n = static_cast<int>(atom.x.size());
      else if (atom.x.size() != n)
        throw ParseError("atoms disagree in dimension");
      atoms.push_back(std::move(atom));
    }
  }
  std::shared_ptr<const GridFunction> density;
  if (j.contains("density_ref")) {
    std::filesystem::path p = j["density_ref"].get<std::string>();
    if (p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    density = std::make_shared<GridFunction>(read_grid(p.string()));
    if (n != 0 && density->n() != n)
      throw ParseError("density and atoms disagree in dimension");
    n = density->n();
  }
  std::vector<Region> window;
  if (j.contains("window")) {
    if (!j["window"].is_array())
      throw ParseError("measure window must be an array of regions");
    for (const auto &r : j["window"])
      window.push_back(region_from_json(r));
  }
  if (n == 0)
    n = j.value("n", 0);
  if (n == 0)
    throw ParseError("measure dimension cannot be inferred (give atoms, density_ref or n)");
  return DiscreteMeasure(n, std::move(atoms), std::move(density), std::move(window));
}

DiscreteMeasure load_measure(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open measure file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError("malformed measure JSON: " + std::string(e.what()));
  }
  return measure_from_json(j, std::filesystem::path(path).parent_path().string());
}

} // namespace celliptic
