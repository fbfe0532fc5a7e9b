#pragma once

#include "celliptic/region.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace celliptic {

/// R^dim-valued samples on the lattice lo + h * i, i in [0, shape) (row-major,
/// last axis fastest). Each lattice point represents the dual cell
/// [x - h/2, x + h/2]^n.
class GridFunction {
public:
  using Index = Eigen::Index;

  GridFunction() = default;
  GridFunction(Eigen::VectorXd lo, double h, std::vector<Index> shape, int dim);

  /// Samples f on the lattice covering [lo, hi] with spacing h; (hi - lo) / h
  /// must be an integer on every axis.
  static GridFunction sample(const Eigen::VectorXd &lo, const Eigen::VectorXd &hi, double h,
                             int dim,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd &)> &f);

  int n() const { return static_cast<int>(lo_.size()); }
  int dim() const { return static_cast<int>(values_.rows()); }
  double h() const { return h_; }
  double cell_volume() const;
  const Eigen::VectorXd &lo() const { return lo_; }
  Eigen::VectorXd hi() const;
  const std::vector<Index> &shape() const { return shape_; }
  Index size() const { return values_.cols(); }

  /// dim x size(), column per lattice point.
  const Eigen::MatrixXd &values() const { return values_; }
  Eigen::MatrixXd &values() { return values_; }

  auto value(Index linear) const { return values_.col(linear); }
  auto value(Index linear) { return values_.col(linear); }

  Index linear_index(const std::vector<Index> &idx) const;
  std::vector<Index> multi_index(Index linear) const;
  Eigen::VectorXd point(Index linear) const;

  /// Nearest lattice index per axis (not clamped).
  std::vector<Index> nearest(const Eigen::VectorXd &x) const;

  /// Lattice point at exactly x (within 1e-9 h), or -1.
  Index find_point(const Eigen::VectorXd &x) const;

  /// Sub-lattice with `margin` points dropped on every side.
  GridFunction shrunk(Index margin) const;

  /// Sub-lattice of points whose index lies in [first, last] per axis.
  GridFunction crop(const std::vector<Index> &first, const std::vector<Index> &last) const;

  /// True if the axis-aligned box [a, b] lies inside [lo, hi].
  bool contains_box(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const;
  bool contains_region(const Region &region) const;

  /// Calls f(linear, point) for every lattice point with a <= x <= b.
  void for_each_in_box(const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                       const std::function<void(Index, const Eigen::VectorXd &)> &f) const;

  /// Throws InvariantError on non-finite values or inconsistent shape.
  void require_valid() const;

private:
  Eigen::VectorXd lo_;
  double h_ = 1.0;
  std::vector<Index> shape_;
  Eigen::MatrixXd values_;
};

/// Lattice points whose cell meets the region, with the fraction of the cell
/// inside (estimated by subsamples^n point sampling on partially covered cells).
struct CellWeights {
  std::vector<Eigen::Index> index;
  std::vector<double> fraction;

  double volume(double cell_volume) const;
};

CellWeights clipped_cells(const GridFunction &g, const Region &region, int subsamples = 4);

struct RegionAverage {
  Eigen::VectorXd mean;
  double oscillation = 0.0;  ///< mean of |u - mean|
  double volume = 0.0;
};

/// Cell-clipped mean and mean oscillation of u over the region.
RegionAverage region_average(const GridFunction &u, const Region &region);
RegionAverage region_average(const GridFunction &u, const CellWeights &cells);

// Grid file format: "CEGRID01" magic, uint64 n, uint64 dim, uint64 shape[n],
// double h, double lo[n], double hi[n], then shape-product * dim float64
// values (row-major lattice, components innermost), little-endian.
// A JSON sidecar <path>.json repeats the header fields.
void write_grid(const std::string &path, const GridFunction &g);
GridFunction read_grid(const std::string &path);

} // namespace celliptic
