#pragma once

/// \file numerics.hpp
/// Discrete Fourier analysis on circles and trapezoidal contour quadrature.
///
/// Every routine here samples a function at the K equispaced points
/// z_j = radius * exp(2 pi i j / K). For functions holomorphic in a
/// neighbourhood of the circle both the Fourier coefficients and the contour
/// integral converge geometrically in K.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace ruelle {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the documented contract (bad parameters, malformed data).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point or parameter outside the region where the mathematics is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine did not reach its accuracy target.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Sampling too coarse for the requested accuracy; retry with more samples.
class ResolutionError : public NumericalFailure {
 public:
  ResolutionError(const std::string& what, int suggested_samples)
      : NumericalFailure(what), suggested_samples_(suggested_samples) {}

  int suggested_samples() const noexcept { return suggested_samples_; }

 private:
  int suggested_samples_;
};

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_power_of_two(int k) noexcept { return k > 0 && (k & (k - 1)) == 0; }

inline int next_power_of_two(int k) noexcept {
  int p = 1;
  while (p < k) p <<= 1;
  return p;
}

namespace detail {

inline void require_samples(int K, int minimum, const char* who) {
  if (!is_power_of_two(K) || K < minimum) {
    std::ostringstream os;
    os << who << ": sample count K=" << K << " must be a power of two >= " << minimum;
    throw InvalidInput(os.str());
  }
}

inline void require_radius(double radius, const char* who) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    std::ostringstream os;
    os << who << ": radius must be positive and finite, got " << radius;
    throw InvalidInput(os.str());
  }
}

inline Complex circle_node(double radius, int j, int K) {
  return std::polar(radius, 2.0 * kPi * j / K);
}

template <class F>
std::vector<Complex> sample_circle(F&& f, double radius, int K, const char* who) {
  std::vector<Complex> values(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    const Complex v = f(circle_node(radius, j, K));
    if (!is_finite(v)) {
      std::ostringstream os;
      os << who << ": non-finite sample at angle " << 2.0 * kPi * j / K << " on radius "
         << radius;
      throw InvalidInput(os.str());
    }
    values[static_cast<std::size_t>(j)] = v;
  }
  return values;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fourier data
// ---------------------------------------------------------------------------

/// Fourier coefficients of theta -> f(radius * e^{i theta}), indices folded
/// to [-K/2, K/2).
class FourierData {
 public:
  FourierData(double radius, std::vector<Complex> raw) : radius_(radius), raw_(std::move(raw)) {}

  double radius() const noexcept { return radius_; }
  int samples() const noexcept { return static_cast<int>(raw_.size()); }
  int min_index() const noexcept { return -samples() / 2; }
  int max_index() const noexcept { return samples() / 2 - 1; }

  /// Coefficient of e^{i m theta}; zero outside the folded index range.
  Complex operator[](int m) const noexcept {
    if (m < min_index() || m > max_index()) return {};
    const int K = samples();
    return raw_[static_cast<std::size_t>(((m % K) + K) % K)];
  }

  double max_abs() const noexcept {
    double best = 0.0;
    for (const auto& c : raw_) best = std::max(best, std::abs(c));
    return best;
  }

  /// Largest |coeff| over the outer quartile of the index range (|m| >= 3K/8),
  /// relative to the largest coefficient overall. Zero for the zero function.
  double tail_ratio() const noexcept {
    const double peak = max_abs();
    if (peak == 0.0) return 0.0;
    const int K = samples();
    const int cut = 3 * K / 8;
    double tail = 0.0;
    for (int m = min_index(); m <= max_index(); ++m) {
      if (std::abs(m) >= cut) tail = std::max(tail, std::abs((*this)[m]));
    }
    return tail / peak;
  }

  /// Sum of |coeff|^2.
  double energy() const noexcept {
    double s = 0.0;
    for (const auto& c : raw_) s += std::norm(c);
    return s;
  }

 private:
  double radius_;
  std::vector<Complex> raw_;
};

inline constexpr double kFourierTailTolerance = 1e-14;

/// coeffs[m] = (1/K) sum_j f(z_j) e^{-2 pi i j m / K}.
template <class F>
FourierData fourier_coeffs(F&& f, double radius, int K) {
  detail::require_radius(radius, "fourier_coeffs");
  detail::require_samples(K, 8, "fourier_coeffs");
  const auto samples = detail::sample_circle(f, radius, K, "fourier_coeffs");
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, samples);
  const double scale = 1.0 / K;
  for (auto& c : out) c *= scale;
  return FourierData(radius, std::move(out));
}

/// Doubles K (starting at K0) until the outer-quartile tail falls below
/// kFourierTailTolerance relative to the peak. Throws ResolutionError past Kmax.
template <class F>
FourierData fourier_coeffs_resolved(F&& f, double radius, int K0, int Kmax = 1 << 16) {
  for (int K = K0; K <= Kmax; K *= 2) {
    auto data = fourier_coeffs(f, radius, K);
    if (data.tail_ratio() < kFourierTailTolerance) return data;
  }
  std::ostringstream os;
  os << "fourier_coeffs: coefficients on radius " << radius << " still unresolved at K=" << Kmax;
  throw ResolutionError(os.str(), 2 * Kmax);
}

/// Default sample count for a truncation of order N.
inline int default_samples(int N) { return next_power_of_two(std::max(256, 8 * N)); }

// ---------------------------------------------------------------------------
// Contour quadrature
// ---------------------------------------------------------------------------

/// (1/2 pi i) \oint_{|z| = radius} f(z) dz by the K-point trapezoidal rule,
/// i.e. (1/K) sum_j f(z_j) z_j.
template <class F>
Complex circle_integral(F&& f, double radius, int K) {
  detail::require_radius(radius, "circle_integral");
  detail::require_samples(K, 8, "circle_integral");
  Complex sum{};
  for (int j = 0; j < K; ++j) {
    const Complex z = detail::circle_node(radius, j, K);
    const Complex v = f(z);
    if (!is_finite(v)) {
      std::ostringstream os;
      os << "circle_integral: non-finite sample at angle " << 2.0 * kPi * j / K
         << " on radius " << radius;
      throw InvalidInput(os.str());
    }
    sum += v * z;
  }
  return sum / static_cast<double>(K);
}

/// circle_integral with K doubled until successive estimates agree to
/// abs_tol + rel_tol*|I|.
template <class F>
Complex circle_integral_resolved(F&& f, double radius, int K0 = 256, double abs_tol = 1e-14,
                                 double rel_tol = 1e-13, int Kmax = 1 << 18) {
  Complex previous = circle_integral(f, radius, K0);
  for (int K = 2 * K0; K <= Kmax; K *= 2) {
    const Complex current = circle_integral(f, radius, K);
    if (std::abs(current - previous) <= abs_tol + rel_tol * std::abs(current)) return current;
    previous = current;
  }
  std::ostringstream os;
  os << "circle_integral: no convergence on radius " << radius << " up to K=" << Kmax;
  throw ResolutionError(os.str(), 2 * Kmax);
}

// ---------------------------------------------------------------------------
// Laurent series
// ---------------------------------------------------------------------------

/// Finite Laurent series sum_{m = first}^{first + size - 1} c_m z^m.
struct LaurentSeries {
  int first = 0;
  std::vector<Complex> coeffs;

  static LaurentSeries monomial(int m, Complex c = 1.0) { return {m, {c}}; }

  int last() const noexcept { return first + static_cast<int>(coeffs.size()) - 1; }

  Complex coeff(int m) const noexcept {
    if (m < first || m > last()) return {};
    return coeffs[static_cast<std::size_t>(m - first)];
  }

  Complex operator()(Complex z) const {
    Complex sum{};
    if (coeffs.empty()) return sum;
    Complex power = std::pow(z, first);
    for (const auto& c : coeffs) {
      sum += c * power;
      power *= z;
    }
    return sum;
  }

  /// Drops coefficients below rel_tol * max|c| and trims the ends.
  LaurentSeries trimmed(double rel_tol) const {
    double peak = 0.0;
    for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
    const double cut = rel_tol * peak;
    int lo = 0;
    int hi = static_cast<int>(coeffs.size()) - 1;
    while (lo <= hi && std::abs(coeffs[static_cast<std::size_t>(lo)]) <= cut) ++lo;
    while (hi >= lo && std::abs(coeffs[static_cast<std::size_t>(hi)]) <= cut) --hi;
    LaurentSeries out{first + lo, {}};
    for (int i = lo; i <= hi; ++i) {
      const Complex c = coeffs[static_cast<std::size_t>(i)];
      out.coeffs.push_back(std::abs(c) <= cut ? Complex{} : c);
    }
    return out;
  }

  /// Laurent coefficients from Fourier data on a circle: c_m = coeff_m / radius^m.
  /// Fourier coefficients at or below rel_tol * peak are dropped before the
  /// radius scaling so sampling noise is not amplified.
  static LaurentSeries from_fourier(const FourierData& data, double rel_tol = 0.0) {
    const double cut = rel_tol * data.max_abs();
    LaurentSeries out{data.min_index(), {}};
    for (int m = data.min_index(); m <= data.max_index(); ++m) {
      const Complex c = data[m];
      out.coeffs.push_back(std::abs(c) <= cut ? Complex{} : c / std::pow(data.radius(), m));
    }
    return out.trimmed(0.0);
  }
};

}  // namespace ruelle
