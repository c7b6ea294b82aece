#pragma once

#include <string_view>

namespace csflock {

/// Repulsive single-wall potential in terms of the distance x > 0 to the wall:
///
///   U(x) = theta * ((ell - x)_+)^4 / x
///
/// Supported on (0, ell), blows up like 1/x at the wall, and U, U', U'', U'''
/// all vanish at x = ell. theta = 0 switches the wall off (negative controls)
/// while keeping the domain check.
class WallPotential {
 public:
  WallPotential(double ell = 1.0, double theta = 1.0);

  double ell() const noexcept { return ell_; }
  double theta() const noexcept { return theta_; }

  double value(double x) const;      // U(x)
  double force(double x) const;      // F(x) = -U'(x) >= 0
  double curvature(double x) const;  // U''(x) >= 0

  friend bool operator==(const WallPotential&, const WallPotential&) = default;

 private:
  double ell_;
  double theta_;
};

enum class GeometryKind { HalfLine, Interval };

std::string_view to_string(GeometryKind kind) noexcept;

/// Where the agents live: (0, inf) or (a, b). The interval mirrors one
/// WallPotential at both ends.
class ConfinementGeometry {
 public:
  static ConfinementGeometry half_line();
  static ConfinementGeometry interval(double a, double b);

  GeometryKind kind() const noexcept { return kind_; }
  double left() const noexcept { return a_; }
  double right() const noexcept { return b_; }

  bool contains(double x) const noexcept;
  // Distance to the nearest wall; negative outside the open domain.
  double wall_distance(double x) const noexcept;

  double potential(const WallPotential& w, double x) const;
  double force(const WallPotential& w, double x) const;
  double curvature(const WallPotential& w, double x) const;

  // Interval walls closer than 2 ell overlap their ranges of influence.
  bool walls_overlap(const WallPotential& w) const noexcept;

  friend bool operator==(const ConfinementGeometry&, const ConfinementGeometry&) = default;

 private:
  ConfinementGeometry(GeometryKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  void require_inside(double x) const;

  GeometryKind kind_;
  double a_;
  double b_;
};

}  // namespace csflock
