#pragma once

/// \file lift_series.hpp
/// Spectral representation of circle-map lifts and of the complexified
/// homotopy built from two of them. The operations that construct these
/// objects from a CircleMap live in lifts.hpp.

#include <cmath>
#include <complex>
#include <memory>
#include <sstream>

#include "ruelle/numerics.hpp"

namespace ruelle {

/// Lift theta -> alpha + d*theta + sum_{n != 0} g_n/(i n) (e^{i n theta} - 1).
///
/// `g` holds the Fourier coefficients of the periodic part of the lift's
/// derivative, so lift'(theta) = d + g(e^{i theta}). The n = 0 slot is zero.
struct LiftSeries {
  int degree = 0;
  double alpha = 0.0;
  LaurentSeries g;
  /// Half-width of the horizontal strip on which the series is trusted.
  double strip = 0.0;
};

/// Terms with |g_n / n| below this are skipped during evaluation.
inline constexpr double kLiftTermCutoff = 1e-18;

inline void require_in_strip(const LiftSeries& lift, Complex theta) {
  if (std::abs(theta.imag()) > lift.strip * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "lift_eval: |Im theta| = " << std::abs(theta.imag()) << " exceeds strip half-width "
       << lift.strip;
    throw DomainError(os.str());
  }
}

inline Complex lift_eval(const LiftSeries& lift, Complex theta) {
  require_in_strip(lift, theta);
  Complex sum = lift.alpha + static_cast<double>(lift.degree) * theta;
  for (int n = lift.g.first; n <= lift.g.last(); ++n) {
    if (n == 0) continue;
    const Complex h = lift.g.coeff(n) / (kI * static_cast<double>(n));
    if (std::abs(h) < kLiftTermCutoff) continue;
    sum += h * (std::exp(kI * static_cast<double>(n) * theta) - 1.0);
  }
  return sum;
}

/// d/dtheta of lift_eval.
inline Complex lift_derivative(const LiftSeries& lift, Complex theta) {
  require_in_strip(lift, theta);
  Complex sum = static_cast<double>(lift.degree);
  for (int n = lift.g.first; n <= lift.g.last(); ++n) {
    if (n == 0) continue;
    const Complex c = lift.g.coeff(n);
    if (std::abs(c) < kLiftTermCutoff) continue;
    sum += c * std::exp(kI * static_cast<double>(n) * theta);
  }
  return sum;
}

/// T(w, e^{i theta}) = exp(i[(1 - w) lift0(theta) + w lift1(theta)]) for w in
/// U = [0,1] + disk(0, eta), holomorphic on the annulus A_{r0,R0}.
struct HomotopyFamily {
  LiftSeries lift0;
  LiftSeries lift1;
  double epsilon = 0.0;  ///< strip half-width, r0 = e^{-epsilon}, R0 = e^{epsilon}
  double eta = 0.0;      ///< radius of the disk thickening [0,1]
  double rho = 0.0;      ///< inf |Re d/dtheta lift_w| over the sampled U x strip
  double r0 = 1.0, R0 = 1.0, r1 = 1.0, R1 = 1.0;
  double inner_margin = 0.0;  ///< log r1 - max log|T| on T_{r0} (d > 0), sampled over U
  double outer_margin = 0.0;  ///< min log|T| on T_{R0} - log R1 (d > 0), sampled over U

  int degree() const noexcept { return lift0.degree; }

  bool contains_parameter(Complex w, double slack = 1e-12) const noexcept {
    const double t = std::clamp(w.real(), 0.0, 1.0);
    return std::abs(w - Complex{t, 0.0}) <= eta + slack;
  }
};

namespace detail {

inline Complex homotopy_theta(const HomotopyFamily& family, Complex z) {
  if (!is_finite(z) || z == Complex{}) throw DomainError("homotopy_eval: z must be finite and nonzero");
  const double a = std::log(std::abs(z));
  if (std::abs(a) > family.epsilon * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "homotopy_eval: |z| = " << std::abs(z) << " outside certified annulus [" << family.r0
       << ", " << family.R0 << "]";
    throw DomainError(os.str());
  }
  return -kI * std::log(z);
}

}  // namespace detail

inline Complex homotopy_eval(const HomotopyFamily& family, Complex w, Complex z) {
  const Complex theta = detail::homotopy_theta(family, z);
  const Complex phase = (1.0 - w) * lift_eval(family.lift0, theta) + w * lift_eval(family.lift1, theta);
  return std::exp(kI * phase);
}

/// z-derivative: T * phase'(theta) / z.
inline Complex homotopy_deriv(const HomotopyFamily& family, Complex w, Complex z) {
  const Complex theta = detail::homotopy_theta(family, z);
  const Complex phase = (1.0 - w) * lift_eval(family.lift0, theta) + w * lift_eval(family.lift1, theta);
  const Complex slope =
      (1.0 - w) * lift_derivative(family.lift0, theta) + w * lift_derivative(family.lift1, theta);
  return std::exp(kI * phase) * slope / z;
}

/// w-derivative: i T (lift1 - lift0)(theta).
inline Complex homotopy_param_deriv(const HomotopyFamily& family, Complex w, Complex z) {
  const Complex theta = detail::homotopy_theta(family, z);
  const Complex l0 = lift_eval(family.lift0, theta);
  const Complex l1 = lift_eval(family.lift1, theta);
  return kI * std::exp(kI * ((1.0 - w) * l0 + w * l1)) * (l1 - l0);
}

/// A single map z -> T(w, z) of a homotopy family.
struct HomotopyMember {
  std::shared_ptr<const HomotopyFamily> family;
  Complex w;
};

}  // namespace ruelle
