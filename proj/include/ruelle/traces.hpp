#pragma once

/// \file traces.hpp
/// Contour-integral traces, closed-form Blaschke traces, Fredholm
/// determinants by three routes, and zero counting for the determinant of
/// (anti-)Blaschke products.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruelle/maps.hpp"
#include "ruelle/spectra.hpp"

namespace ruelle {

struct TraceReport {
  Complex contour;
  Complex eigensum;
  std::optional<Complex> closed_form;
  double max_pairwise_diff = 0.0;
};

inline TraceReport make_trace_report(Complex contour, Complex eigensum, std::optional<Complex> closed_form) {
  TraceReport t{contour, eigensum, closed_form, std::abs(contour - eigensum)};
  if (closed_form) {
    t.max_pairwise_diff = std::max({t.max_pairwise_diff, std::abs(contour - *closed_form),
                                    std::abs(eigensum - *closed_form)});
  }
  return t;
}

namespace detail {

/// 1/(tau(z) - z), zero where tau is infinite.
inline Complex trace_integrand(const CircleMap& map, Complex z) {
  const Complex t = eval(map, z);
  if (!is_finite(t)) return {};
  return 1.0 / (t - z);
}

}  // namespace detail

/// omega (1/2 pi i) oint over the oriented boundary of A_{r,R} of dz/(tau(z) - z).
/// K = 0 doubles the sample count until the estimates settle.
inline Complex trace_contour(const CircleMap& map, const Annulus& annulus, int K = 0) {
  const auto verdict = check_holo_expansive(map, annulus);
  if (verdict.kind == Expansivity::none) {
    std::ostringstream os;
    os << "trace_contour: map not holomorphically expansive on A(" << annulus.r << ", " << annulus.R
       << "): " << verdict.reason;
    throw DomainError(os.str());
  }
  const int omega = verdict.kind == Expansivity::A1 ? 1 : -1;
  for (double radius : {annulus.r, annulus.R}) {
    const int n = 4096;
    for (int j = 0; j < n; ++j) {
      const Complex z = detail::circle_node(radius, j, n);
      const Complex t = eval(map, z);
      if (is_finite(t) && std::abs(t - z) < 1e-8) {
        throw DomainError("trace_contour: fixed point on the boundary; contour is ill-posed");
      }
    }
  }
  const auto f = [&](Complex z) { return detail::trace_integrand(map, z); };
  Complex outer, inner;
  if (K > 0) {
    outer = circle_integral(f, annulus.R, K);
    inner = circle_integral(f, annulus.r, K);
  } else {
    outer = circle_integral_resolved(f, annulus.R, 256, 1e-15, 1e-14);
    inner = circle_integral_resolved(f, annulus.r, 256, 1e-15, 1e-14);
  }
  return static_cast<double>(omega) * (outer - inner);
}

/// Trace of the n-th power via the contour formula for the n-th iterate. When
/// the iterate fails the boundary inclusions the annulus is pulled toward the
/// unit circle (log r and log R halved), at most three times.
inline Complex trace_power(const CircleMap& map, int n, const Annulus& annulus) {
  if (n < 1) throw InvalidInput("trace_power: n must be at least 1");
  const CircleMap it = iterate(map, n);
  Annulus a = annulus;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    if (check_holo_expansive(it, a).kind != Expansivity::none) return trace_contour(it, a);
    a = Annulus(std::sqrt(a.r), std::sqrt(a.R));
  }
  std::ostringstream os;
  os << "trace_power: iterate " << n
     << " is not holomorphically expansive on any retry annulus; use a smaller n or another annulus";
  throw DomainError(os.str());
}

/// Orientation preserving: 1 + mu^n/(1 - mu^n) + conj(mu)^n/(1 - conj(mu)^n).
/// Anti: 1 for odd n, 1 + 2 mu^n/(1 - mu^n) for even n.
inline Complex blaschke_trace_closed(Complex mu, bool anti, int n) {
  if (!(std::abs(mu) < 1.0)) throw DomainError("blaschke_trace_closed: need |mu| < 1");
  if (n < 1) throw InvalidInput("blaschke_trace_closed: n must be at least 1");
  const Complex p = std::pow(mu, n);
  if (anti) {
    if (n % 2 == 1) return 1.0;
    return 1.0 + 2.0 * p / (1.0 - p);
  }
  const Complex q = std::conj(p);
  return 1.0 + p / (1.0 - p) + q / (1.0 - q);
}

inline Complex eigensum(const Spectrum& s) {
  Complex sum{};
  for (const auto& z : s.eigenvalues) sum += z;
  return sum;
}

struct DeterminantValue {
  Complex value;
  double tail_bound = 0.0;
  std::string warning;
};

/// prod over converged eigenvalues of (1 - e^zeta lambda_k), with the
/// neglected tail estimated from a geometric fit of the last usable moduli.
inline DeterminantValue det_from_spectrum(const Spectrum& s, Complex zeta) {
  const Complex z = std::exp(zeta);
  const auto values = s.converged();
  DeterminantValue out{1.0, 0.0, {}};
  for (const auto& lambda : values) out.value *= 1.0 - z * lambda;

  const auto idx = usable_decay_indices(s);
  if (idx.size() >= 2 && values.size() < s.eigenvalues.size()) {
    const double first = std::abs(values[static_cast<std::size_t>(idx.front() - 1)]);
    const double last = std::abs(values[static_cast<std::size_t>(idx.back() - 1)]);
    const double q = std::pow(last / first, 1.0 / std::max(1, idx.back() - idx.front()));
    if (q < 1.0) {
      const double tail = last * q / (1.0 - q);
      out.tail_bound = std::abs(out.value) * std::expm1(std::abs(z) * tail);
    }
  }
  if (out.tail_bound > 1e-6 * std::abs(out.value)) {
    out.warning = "det_from_spectrum: neglected eigenvalue tail exceeds 1e-6 relative";
  }
  return out;
}

/// Tr L^n for n = 1..nmax (index 0 holds n = 1).
inline std::vector<Complex> power_traces(const CircleMap& map, const Annulus& annulus, int nmax) {
  std::vector<Complex> out;
  for (int n = 1; n <= nmax; ++n) out.push_back(trace_power(map, n, annulus));
  return out;
}

inline constexpr double kTraceSeriesRadius = 0.5;

inline void require_trace_series_window(Complex z) {
  if (std::abs(z) > kTraceSeriesRadius) {
    std::ostringstream os;
    os << "det_from_traces: |z| = " << std::abs(z) << " outside the series validity window |z| <= 0.5";
    throw DomainError(os.str());
  }
}

/// exp(-sum_n z^n/n Tr L^n) from precomputed traces; |z| <= 1/2.
inline DeterminantValue det_from_traces(const std::vector<Complex>& traces, Complex z) {
  require_trace_series_window(z);
  if (traces.empty()) throw InvalidInput("det_from_traces: need at least one trace");
  Complex sum{};
  Complex zn{1.0, 0.0};
  Complex last{};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    zn *= z;
    last = zn / static_cast<double>(i + 1) * traces[i];
    sum += last;
  }
  DeterminantValue out{std::exp(-sum), 0.0, {}};
  out.tail_bound = std::abs(out.value) * std::abs(last) * std::abs(z) / (1.0 - std::abs(z));
  return out;
}

inline DeterminantValue det_from_traces(const CircleMap& map, const Annulus& annulus, Complex z, int nmax) {
  require_trace_series_window(z);
  if (z == Complex{}) return {1.0, 0.0, {}};
  return det_from_traces(power_traces(map, annulus, nmax), z);
}

namespace detail {

/// Smallest k with |mu|^k |z| below 1e-17 (at least 1, at most 100000).
inline int auto_kmax(Complex mu, Complex z) {
  const double m = std::abs(mu);
  if (m == 0.0 || z == Complex{}) return 1;
  const double k = (std::log(1e-17) - std::log(std::abs(z))) / std::log(m);
  return std::clamp(static_cast<int>(std::ceil(k)), 1, 100000);
}

/// Eigenvalues mu^k and their partners (conj(mu)^k, or -mu^k in the anti case).
template <class F>
void for_each_product_factor(Complex mu, bool anti, int kmax, F&& f) {
  Complex p{1.0, 0.0};
  for (int k = 1; k <= kmax; ++k) {
    p *= mu;
    f(p);
    f(anti ? -p : std::conj(p));
  }
}

}  // namespace detail

/// (1 - z) prod_{k <= kmax} (1 - mu^k z)(1 - conj(mu)^k z), or with the partner
/// factor (1 + mu^k z) in the anti case. kmax = 0 selects it automatically.
inline DeterminantValue det_product_formula(Complex mu, bool anti, Complex z, int kmax = 0) {
  if (!(std::abs(mu) < 1.0)) throw DomainError("det_product_formula: need |mu| < 1");
  if (kmax <= 0) kmax = detail::auto_kmax(mu, z);
  DeterminantValue out{1.0 - z, 0.0, {}};
  detail::for_each_product_factor(mu, anti, kmax, [&](Complex lambda) { out.value *= 1.0 - lambda * z; });
  const double m = std::abs(mu);
  const double tail = 2.0 * std::pow(m, kmax + 1) * std::abs(z) / (1.0 - m);
  out.tail_bound = std::abs(out.value) * std::expm1(tail);
  return out;
}

/// log|det| from the product formula as a sum of logarithms (no overflow).
inline double log_abs_det_product(Complex mu, bool anti, Complex z) {
  if (!(std::abs(mu) < 1.0)) throw DomainError("log_abs_det_product: need |mu| < 1");
  double sum = std::log(std::abs(1.0 - z));
  detail::for_each_product_factor(mu, anti, detail::auto_kmax(mu, z),
                                  [&](Complex lambda) { sum += std::log(std::abs(1.0 - lambda * z)); });
  return sum;
}

// ---------------------------------------------------------------------------
// Zero lattice
// ---------------------------------------------------------------------------

namespace detail {

/// One arithmetic column of zeros x + i(y + step m), m in Z.
struct ZeroColumn {
  double x;
  double y;
  double step;
};

/// Columns of zeros of zeta -> det(I - e^zeta L) for the (anti-)Blaschke
/// spectrum, out to real part x_max. Repeated columns encode multiplicity.
inline std::vector<ZeroColumn> zero_columns(Complex mu, bool anti, double x_max) {
  std::vector<ZeroColumn> cols{{0.0, 0.0, 2.0 * kPi}};
  if (mu == Complex{}) return cols;
  const Complex L = -std::log(mu);
  for (int k = 1; k * L.real() <= x_max; ++k) {
    const Complex a = static_cast<double>(k) * L;
    if (anti) {
      cols.push_back({a.real(), a.imag(), kPi});
    } else {
      cols.push_back({a.real(), a.imag(), 2.0 * kPi});
      cols.push_back({a.real(), -a.imag(), 2.0 * kPi});
    }
  }
  return cols;
}

}  // namespace detail

/// Zeros (with multiplicity) in the closed disk |zeta - center| <= radius.
inline std::vector<Complex> det_zeros_in_disk(Complex mu, bool anti, Complex center, double radius) {
  if (!(std::abs(mu) < 1.0)) throw DomainError("det_zeros: need |mu| < 1");
  if (!(radius >= 0.0)) throw InvalidInput("det_zeros: radius must be non-negative");
  const double slack = 1e-12 * std::max(1.0, radius);
  std::vector<Complex> out;
  for (const auto& col : detail::zero_columns(mu, anti, center.real() + radius + 1.0)) {
    const double dx = col.x - center.real();
    if (std::abs(dx) > radius + slack) continue;
    const double h = std::sqrt(std::max(0.0, (radius + slack) * (radius + slack) - dx * dx));
    const long lo = static_cast<long>(std::ceil((center.imag() - h - col.y) / col.step));
    const long hi = static_cast<long>(std::floor((center.imag() + h - col.y) / col.step));
    for (long m = lo; m <= hi; ++m) {
      const Complex zeta{col.x, col.y + col.step * static_cast<double>(m)};
      if (std::abs(zeta - center) <= radius + slack) out.push_back(zeta);
    }
  }
  return out;
}

inline void require_center_off_lattice(Complex mu, bool anti, Complex center) {
  const auto near = det_zeros_in_disk(mu, anti, center, 1e-9);
  if (!near.empty()) {
    std::ostringstream os;
    os << "det_zero_count_lattice: center " << center << " lies within 1e-9 of a zero; shift the center";
    throw DomainError(os.str());
  }
}

/// Number of determinant zeros in the closed disk |zeta - center| <= radius.
inline int det_zero_count_lattice(Complex mu, Complex center, double radius, bool anti = false) {
  require_center_off_lattice(mu, anti, center);
  return static_cast<int>(det_zeros_in_disk(mu, anti, center, radius).size());
}

struct JensenResult {
  double jensen_integral = 0.0;  ///< int_0^{2R} N(t)/t dt from the enumerated zeros
  double direct_integral = 0.0;  ///< circle mean of log|Z| minus log|Z(center)|
  double offset = 0.0;           ///< angular offset of the quadrature nodes
};

/// Both sides of Jensen's formula on the disk |zeta + 1| <= 2R.
inline JensenResult jensen_count_check(Complex mu, double R, int K = 4096, bool anti = false) {
  if (K < 1024) throw InvalidInput("jensen_count_check: K must be at least 1024");
  if (!(R > 0.0)) throw InvalidInput("jensen_count_check: R must be positive");
  const Complex center{-1.0, 0.0};
  const double rho = 2.0 * R;
  require_center_off_lattice(mu, anti, center);

  JensenResult out;
  for (const auto& zeta : det_zeros_in_disk(mu, anti, center, rho)) {
    const double d = std::abs(zeta - center);
    if (d < rho) out.jensen_integral += std::log(rho / d);
  }

  const auto zeros_near_circle = det_zeros_in_disk(mu, anti, center, rho + 1.0);
  const double log_center = log_abs_det_product(mu, anti, std::exp(center));
  for (int attempt = 0; attempt <= 5; ++attempt) {
    const double offset = (0.5 + 0.1 * attempt) * 2.0 * kPi / K;
    bool clear = true;
    double sum = 0.0;
    for (int j = 0; j < K && clear; ++j) {
      const Complex zeta = center + std::polar(rho, offset + 2.0 * kPi * j / K);
      for (const auto& z0 : zeros_near_circle) {
        if (std::abs(zeta - z0) < 1e-6) {
          clear = false;
          break;
        }
      }
      sum += log_abs_det_product(mu, anti, std::exp(zeta));
    }
    if (clear) {
      out.direct_integral = sum / K - log_center;
      out.offset = offset;
      return out;
    }
  }
  throw NumericalFailure("jensen_count_check: quadrature nodes hit zeros after 5 jitters");
}

struct GrowthFit {
  double exponent = 0.0;
  double r2 = 0.0;
};

/// Slope of log(log|Z(zeta)|) against log(zeta) for real zeta log-spaced in
/// [zeta_min, zeta_max], using the product formula.
inline GrowthFit det_growth_exponent(Complex mu, bool anti, double zeta_min, double zeta_max, int points = 40) {
  std::vector<double> xs, ys;
  for (int i = 0; i < points; ++i) {
    const double zeta = zeta_min * std::pow(zeta_max / zeta_min, static_cast<double>(i) / (points - 1));
    const double v = log_abs_det_product(mu, anti, std::exp(Complex{zeta, 0.0}));
    if (v > 0.0) {
      xs.push_back(std::log(zeta));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 3) throw NumericalFailure("det_growth_exponent: log|Z| not positive on the sample range");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return {sxy / sxx, syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0};
}

}  // namespace ruelle
