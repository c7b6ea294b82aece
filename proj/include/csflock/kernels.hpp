#pragma once

#include <string_view>

namespace csflock {

enum class KernelFamily { PowerLaw, Constant };

std::string_view to_string(KernelFamily family) noexcept;

/// Communication weight phi(|r|) between two agents at separation r.
///
/// PowerLaw: phi(r) = H (1 + r^2)^(-beta).  Constant: phi(r) = H.
/// Both families are positive, even and nonincreasing in |r|, which is all the
/// alignment estimates rely on.
class CommunicationKernel {
 public:
  static CommunicationKernel power_law(double amplitude, double exponent);
  static CommunicationKernel constant(double amplitude);

  KernelFamily family() const noexcept { return family_; }
  double amplitude() const noexcept { return amplitude_; }
  double exponent() const noexcept { return exponent_; }

  double eval(double r) const;
  double operator()(double r) const { return eval(r); }

  /// Phi(D) = int_0^D phi(r) dr. Closed form where one is implemented,
  /// otherwise adaptive Gauss-Kronrod at relative tolerance 1e-10.
  double primitive(double distance) const;

  /// Phi(D) always by adaptive quadrature; lets tests compare against the
  /// closed forms.
  double primitive_by_quadrature(double distance, double rel_tol = 1e-10) const;

  bool has_closed_form_primitive() const noexcept;

  /// int_0^inf phi = inf. Decided analytically from the family parameters.
  bool is_fat_tail() const noexcept;

  /// c0 = phi(R): a lower bound for phi on [0, R] by monotonicity.
  double lower_bound(double radius) const;

  friend bool operator==(const CommunicationKernel&, const CommunicationKernel&) = default;

 private:
  CommunicationKernel(KernelFamily family, double amplitude, double exponent)
      : family_(family), amplitude_(amplitude), exponent_(exponent) {}

  KernelFamily family_;
  double amplitude_;
  double exponent_;
};

}  // namespace csflock
