#pragma once

#include <Eigen/Dense>

namespace celliptic {

/// Ball B(center, radius) or annulus B \ closure(lambda B).
///
/// A ball is the lambda = 0 case; an *annulus* with lambda = 0 is the
/// punctured ball B \ {center}. Only point queries see the difference.
struct Region {
  enum class Kind { ball, annulus };

  Kind kind = Kind::ball;
  Eigen::VectorXd center;
  double radius = 1.0;
  double lambda = 0.0;

  static Region ball(Eigen::VectorXd center, double radius);
  static Region annulus(Eigen::VectorXd center, double radius, double lambda);

  int n() const { return static_cast<int>(center.size()); }
  double inner_radius() const { return kind == Kind::ball ? 0.0 : lambda * radius; }

  /// Throws InvariantError unless radius > 0 and 0 <= lambda <= 1/2.
  void require_valid() const;

  bool contains(const Eigen::Ref<const Eigen::VectorXd> &x) const;
  double volume() const;

  /// Same center, radius multiplied by s.
  Region scaled(double s) const;

  /// Image under x -> t x + shift.
  Region mapped(double t, const Eigen::VectorXd &shift) const;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

} // namespace celliptic
