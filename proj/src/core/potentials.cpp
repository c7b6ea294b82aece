#include "csflock/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csflock/error.hpp"

namespace csflock {

namespace {

void require_positive_distance(double x) {
  if (!(x > 0.0) || std::isnan(x)) {
    std::ostringstream msg;
    msg << "wall distance " << x << " is not positive (agent at or behind the wall)";
    throw DomainError(msg.str());
  }
}

}  // namespace

WallPotential::WallPotential(double ell, double theta) : ell_(ell), theta_(theta) {
  if (!(std::isfinite(ell) && ell > 0.0)) throw InputError("potential ell must be positive and finite");
  if (!(std::isfinite(theta) && theta >= 0.0))
    throw InputError("potential theta must be nonnegative and finite");
}

double WallPotential::value(double x) const {
  require_positive_distance(x);
  if (x >= ell_) return 0.0;
  const double d = ell_ - x;
  const double d2 = d * d;
  return theta_ * d2 * d2 / x;
}

double WallPotential::force(double x) const {
  require_positive_distance(x);
  if (x >= ell_) return 0.0;
  const double d = ell_ - x;
  const double d3 = d * d * d;
  return theta_ * (4.0 * d3 * x + d3 * d) / (x * x);
}

double WallPotential::curvature(double x) const {
  require_positive_distance(x);
  if (x >= ell_) return 0.0;
  const double d = ell_ - x;
  const double d2 = d * d;
  return theta_ * (12.0 * d2 * x * x + 8.0 * d2 * d * x + 2.0 * d2 * d2) / (x * x * x);
}

std::string_view to_string(GeometryKind kind) noexcept {
  switch (kind) {
    case GeometryKind::HalfLine: return "halfline";
    case GeometryKind::Interval: return "interval";
  }
  return "unknown";
}

ConfinementGeometry ConfinementGeometry::half_line() {
  return ConfinementGeometry(GeometryKind::HalfLine, 0.0, std::numeric_limits<double>::infinity());
}

ConfinementGeometry ConfinementGeometry::interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw InputError("interval ends must be finite");
  if (!(b - a > 0.0)) throw InputError("interval needs a < b");
  return ConfinementGeometry(GeometryKind::Interval, a, b);
}

bool ConfinementGeometry::contains(double x) const noexcept { return wall_distance(x) > 0.0; }

double ConfinementGeometry::wall_distance(double x) const noexcept {
  if (std::isnan(x)) return -std::numeric_limits<double>::infinity();
  if (kind_ == GeometryKind::HalfLine) return x;
  return std::min(x - a_, b_ - x);
}

bool ConfinementGeometry::walls_overlap(const WallPotential& w) const noexcept {
  return kind_ == GeometryKind::Interval && w.ell() > 0.5 * (b_ - a_);
}

void ConfinementGeometry::require_inside(double x) const {
  if (!contains(x)) {
    std::ostringstream msg;
    msg << "position " << x << " is outside the open domain";
    if (kind_ == GeometryKind::Interval) msg << " (" << a_ << ", " << b_ << ")";
    else msg << " (0, inf)";
    throw DomainError(msg.str());
  }
}

double ConfinementGeometry::potential(const WallPotential& w, double x) const {
  require_inside(x);
  if (kind_ == GeometryKind::HalfLine) return w.value(x);
  return w.value(x - a_) + w.value(b_ - x);
}

double ConfinementGeometry::force(const WallPotential& w, double x) const {
  require_inside(x);
  if (kind_ == GeometryKind::HalfLine) return w.force(x);
  return w.force(x - a_) - w.force(b_ - x);
}

double ConfinementGeometry::curvature(const WallPotential& w, double x) const {
  require_inside(x);
  if (kind_ == GeometryKind::HalfLine) return w.curvature(x);
  return w.curvature(x - a_) + w.curvature(b_ - x);
}

}  // namespace csflock
