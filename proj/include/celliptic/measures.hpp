#pragma once

#include "celliptic/grid.hpp"
#include "celliptic/region.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace celliptic {

struct Atom {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

/// Finite W-valued measure: point atoms plus an optional density sampled on a
/// lattice (each lattice point carries value * h^n for its cell). A window of
/// regions restricts the density to cells whose lattice point lies in all of
/// them; |.| is the Euclidean norm on W.
class DiscreteMeasure {
public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(int n, std::vector<Atom> atoms = {},
                           std::shared_ptr<const GridFunction> density = nullptr,
                           std::vector<Region> window = {});

  int n() const { return n_; }
  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::shared_ptr<const GridFunction> &density() const { return density_; }
  const std::vector<Region> &window() const { return window_; }

  /// |value| * h^n per lattice point of the density (empty without density).
  const Eigen::VectorXd &cell_mass() const;

  bool in_window(const Eigen::VectorXd &x) const;

  /// Calls f(point, mass) for every active density cell whose lattice point
  /// lies in the box [a, b].
  void for_each_cell(const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                     const std::function<void(Eigen::Index, const Eigen::VectorXd &, double)> &f)
      const;

  double total_variation() const;

  /// Same measure with all weights multiplied by a.
  DiscreteMeasure scaled(double a) const;

private:
  int n_ = 0;
  std::vector<Atom> atoms_;
  std::shared_ptr<const GridFunction> density_;
  std::shared_ptr<const Eigen::VectorXd> cell_mass_;
  std::vector<Region> window_;
};

/// mu restricted to the region: atoms and cells whose representative point
/// lies in it.
DiscreteMeasure restrict(const DiscreteMeasure &mu, const Region &region);

/// |mu|(B(x0, rho)) with an open ball.
double mass_in_ball(const DiscreteMeasure &mu, const Eigen::VectorXd &x0, double rho);

struct PotentialValue {
  double value = 0.0;
  bool infinite = false;
};

/// int |x0 - y|^{s-n} d|mu|(y). The density cell containing x0 contributes the
/// exact integral of |y - x0|^{s-n} over that cell times its value.
PotentialValue riesz_potential(const DiscreteMeasure &mu, double s, const Eigen::VectorXd &x0);

/// int over the centered unit cube in R^n of |z|^{s-n} dz, s > 0.
double unit_cube_riesz_integral(int n, double s);

/// Geometric ladder R, R/2, ..., R / 2^{levels - 1}.
std::vector<double> dyadic_radii(double R, int levels);

/// max over radii of |mu|(B(x0, r)) / r^{n-k}.
double fractional_maximal(const DiscreteMeasure &mu, int k, const Eigen::VectorXd &x0,
                          const std::vector<double> &radii);

/// { "atoms": [ { "x": [...], "w": [...] } ], "density_ref": path, "window": [region] }
nlohmann::json measure_to_json(const DiscreteMeasure &mu, const std::string &density_ref = "");
DiscreteMeasure measure_from_json(const nlohmann::json &j, const std::string &base_dir = "");
DiscreteMeasure load_measure(const std::string &path);

nlohmann::json region_to_json(const Region &region);
Region region_from_json(const nlohmann::json &j);

} // namespace celliptic
