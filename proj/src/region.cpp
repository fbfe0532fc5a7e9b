#include "celliptic/region.hpp"

#include "celliptic/error.hpp"

#include <cmath>
#include <numbers>

namespace celliptic {

Region Region::ball(Eigen::VectorXd center, double radius) {
  Region r;
  r.kind = Kind::ball;
  r.center = std::move(center);
  r.radius = radius;
  r.lambda = 0.0;
  return r;
}

Region Region::annulus(Eigen::VectorXd center, double radius, double lambda) {
  Region r;
  r.kind = Kind::annulus;
  r.center = std::move(center);
  r.radius = radius;
  r.lambda = lambda;
  return r;
}

void Region::require_valid() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvariantError("region radius must be positive");
  if (!(lambda >= 0.0 && lambda <= 0.5))
    throw InvariantError("region lambda must lie in [0, 1/2]");
  if (kind == Kind::ball && lambda != 0.0)
    throw InvariantError("a ball has lambda = 0");
  if (center.size() < 1 || !center.allFinite())
    throw InvariantError("region center must be a finite vector");
}

bool Region::contains(const Eigen::Ref<const Eigen::VectorXd> &x) const {
  const double d = (x - center).norm();
  if (d >= radius)
    return false;
  if (kind == Kind::annulus)
    return d > lambda * radius;
  return true;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double Region::volume() const {
  return unit_ball_volume(n()) * std::pow(radius, n()) *
         (1.0 - std::pow(inner_radius() / radius, n()));
}

Region Region::scaled(double s) const {
  Region r = *this;
  r.radius *= s;
  return r;
}

Region Region::mapped(double t, const Eigen::VectorXd &shift) const {
  Region r = *this;
  r.center = t * center + shift;
  r.radius *= t;
  return r;
}

} // namespace celliptic
