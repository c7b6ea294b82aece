#include "csflock/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "csflock/error.hpp"

namespace csflock {

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::PowerLaw: return "powerlaw";
    case KernelFamily::Constant: return "constant";
  }
  return "unknown";
}

CommunicationKernel CommunicationKernel::power_law(double amplitude, double exponent) {
  if (!(std::isfinite(amplitude) && amplitude > 0.0))
    throw InputError("kernel amplitude H must be positive and finite");
  if (!(std::isfinite(exponent) && exponent >= 0.0))
    throw InputError("kernel exponent beta must be nonnegative and finite");
  return CommunicationKernel(KernelFamily::PowerLaw, amplitude, exponent);
}

CommunicationKernel CommunicationKernel::constant(double amplitude) {
  if (!(std::isfinite(amplitude) && amplitude > 0.0))
    throw InputError("kernel amplitude H must be positive and finite");
  return CommunicationKernel(KernelFamily::Constant, amplitude, 0.0);
}

double CommunicationKernel::eval(double r) const {
  if (!std::isfinite(r)) throw InputError("kernel argument must be finite");
  if (family_ == KernelFamily::Constant) return amplitude_;
  const double s = 1.0 + r * r;
  // Common exponents skip pow(); the results match pow to the last ulp or so
  // and keep the O(N^2) loop cheap.
  if (exponent_ == 0.0) return amplitude_;
  if (exponent_ == 0.5) return amplitude_ / std::sqrt(s);
  if (exponent_ == 0.25) return amplitude_ / std::sqrt(std::sqrt(s));
  if (exponent_ == 1.0) return amplitude_ / s;
  return amplitude_ * std::pow(s, -exponent_);
}

bool CommunicationKernel::has_closed_form_primitive() const noexcept {
  if (family_ == KernelFamily::Constant) return true;
  return exponent_ == 0.0 || exponent_ == 0.5 || exponent_ == 1.0 || exponent_ == 1.5;
}

double CommunicationKernel::primitive(double distance) const {
  if (!(distance >= 0.0)) throw InputError("primitive needs a nonnegative distance");
  if (!std::isfinite(distance)) throw InputError("primitive needs a finite distance");
  if (distance == 0.0) return 0.0;
  if (family_ == KernelFamily::Constant || exponent_ == 0.0) return amplitude_ * distance;
  if (exponent_ == 0.5) return amplitude_ * std::asinh(distance);
  if (exponent_ == 1.0) return amplitude_ * std::atan(distance);
  if (exponent_ == 1.5) return amplitude_ * distance / std::sqrt(1.0 + distance * distance);
  return primitive_by_quadrature(distance);
}

double CommunicationKernel::primitive_by_quadrature(double distance, double rel_tol) const {
  if (!(distance >= 0.0) || !std::isfinite(distance))
    throw InputError("primitive needs a finite nonnegative distance");
  if (distance == 0.0) return 0.0;
  auto integrand = [this](double r) { return eval(r); };
  using boost::math::quadrature::gauss_kronrod;
  // The integrand is smooth with scale 1; splitting at r = 1 keeps the
  // near-origin curvature and the slowly varying tail in separate panels.
  const double split = std::min(distance, 1.0);
  double total = gauss_kronrod<double, 31>::integrate(integrand, 0.0, split, 15, rel_tol);
  if (distance > split)
    total += gauss_kronrod<double, 31>::integrate(integrand, split, distance, 15, rel_tol);
  return total;
}

bool CommunicationKernel::is_fat_tail() const noexcept {
  if (family_ == KernelFamily::Constant) return true;
  // (1 + r^2)^(-beta) ~ r^(-2 beta); the tail integral diverges iff 2 beta <= 1.
  return 2.0 * exponent_ <= 1.0;
}

double CommunicationKernel::lower_bound(double radius) const {
  if (!(radius >= 0.0)) throw InputError("lower bound radius must be nonnegative");
  return eval(radius);
}

}  // namespace csflock
