#pragma once

/// \file lifts.hpp
/// Spectral lifts of circle maps, certified complexified homotopies between
/// two maps of equal degree, and a search for annuli on which a map is
/// holomorphically expansive.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "ruelle/lift_series.hpp"
#include "ruelle/maps.hpp"
#include "ruelle/numerics.hpp"

namespace ruelle {

namespace detail {

/// Geometric decay rate of |c_n| as |n| grows on one side (n > 0 or n < 0),
/// from a least-squares fit of log|c_n| against |n| over the significant
/// coefficients. Infinity when fewer than three are significant.
inline double one_sided_decay(const LaurentSeries& g, int sign, double floor) {
  std::vector<double> xs, ys;
  for (int n = sign; sign > 0 ? n <= g.last() : n >= g.first; n += sign) {
    const double a = std::abs(g.coeff(n));
    if (a > floor) {
      xs.push_back(std::abs(n));
      ys.push_back(std::log(a));
    }
  }
  if (xs.size() < 3) return std::numeric_limits<double>::infinity();
  // A series that stops well above the noise floor is a trigonometric polynomial.
  if (std::exp(ys.back()) > 1e3 * floor) return std::numeric_limits<double>::infinity();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return slope < 0.0 ? -slope : 0.0;
}

}  // namespace detail

/// Strip half-width used when the periodic part has no measurable decay
/// (including the case where it vanishes).
inline constexpr double kMaxLiftStrip = 1.0;

/// Lift of a circle-preserving map from the Fourier series of
/// (1/i) d/dtheta log tau(e^{i theta}) = z tau'(z)/tau(z) on the unit circle.
inline LiftSeries lift(const CircleMap& map, int K = 1024) {
  detail::require_samples(K, 16, "lift");
  const auto log_derivative = [&](Complex z) {
    const Complex t = eval(map, z);
    if (t == Complex{} || !is_finite(t)) throw DomainError("lift: tau vanishes or blows up on the unit circle");
    return z * deriv(map, z) / t;
  };
  FourierData data = fourier_coeffs(log_derivative, 1.0, K);
  if (data.tail_ratio() >= 1e-12) data = fourier_coeffs_resolved(log_derivative, 1.0, 2 * K);

  const Complex c0 = data[0];
  const double rounded = std::round(c0.real());
  if (std::abs(c0 - Complex{rounded, 0.0}) > 1e-8 || static_cast<int>(rounded) != map.degree()) {
    std::ostringstream os;
    os << "lift: mean log-derivative " << c0 << " inconsistent with degree " << map.degree();
    throw NumericalFailure(os.str());
  }

  LiftSeries out;
  out.degree = map.degree();
  out.alpha = std::arg(eval(map, Complex{1.0, 0.0}));
  const double cut = 1e-16 * std::max(1.0, data.max_abs());
  LaurentSeries g{data.min_index(), {}};
  for (int n = data.min_index(); n <= data.max_index(); ++n) {
    const Complex c = data[n];
    g.coeffs.push_back(n == 0 || std::abs(c) <= cut ? Complex{} : c);
  }
  out.g = g.trimmed(0.0);
  if (out.g.coeffs.empty()) out.g = LaurentSeries{0, {}};

  const double floor = 1e-13 * std::max(1.0, data.max_abs());
  const double rate = std::min(detail::one_sided_decay(out.g, 1, floor), detail::one_sided_decay(out.g, -1, floor));
  out.strip = std::min(kMaxLiftStrip, 0.5 * rate);
  if (!(out.strip > 0.0)) throw NumericalFailure("lift: coefficients show no geometric decay");
  return out;
}

struct HomotopyOptions {
  int K = 1024;            ///< Fourier samples for the lifts
  int samples = 4096;      ///< boundary samples for the inclusion checks
  double min_epsilon = 1e-4;
  std::optional<double> epsilon;  ///< fixed strip half-width instead of the search
  std::optional<double> eta;      ///< fixed parameter-disk radius instead of the search
};

namespace detail {

struct StripSamples {
  std::vector<Complex> l0, l1, d0, d1;  ///< lift values and derivatives
};

inline StripSamples sample_line(const HomotopyFamily& f, double imag, int samples) {
  StripSamples s;
  for (int j = 0; j < samples; ++j) {
    const Complex theta{2.0 * kPi * j / samples, imag};
    s.l0.push_back(lift_eval(f.lift0, theta));
    s.l1.push_back(lift_eval(f.lift1, theta));
    s.d0.push_back(lift_derivative(f.lift0, theta));
    s.d1.push_back(lift_derivative(f.lift1, theta));
  }
  return s;
}

/// inf over w in U and the sampled theta of sign(d) Re phase'_w(theta). The
/// phase derivative is affine in w, so the infimum over U is attained at
/// t in {0, 1} shifted by eta against the gradient.
inline double expansion_floor(const StripSamples& s, int sign, double eta) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.d0.size(); ++j) {
    const Complex diff = s.d1[j] - s.d0[j];
    const double lo = std::min(sign * s.d0[j].real(), sign * s.d1[j].real()) - eta * std::abs(diff);
    best = std::min(best, lo);
  }
  return best;
}

/// Extremes over w in U of log|T(w, z)| = -Im[lift0 + w (lift1 - lift0)].
inline void log_modulus_range(const StripSamples& s, double eta, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (std::size_t j = 0; j < s.l0.size(); ++j) {
    const Complex diff = s.l1[j] - s.l0[j];
    const double a0 = -s.l0[j].imag();
    const double a1 = -s.l1[j].imag();
    hi = std::max(hi, std::max(a0, a1) + eta * std::abs(diff));
    lo = std::min(lo, std::min(a0, a1) - eta * std::abs(diff));
  }
}

}  // namespace detail

/// Builds T(w, z) = exp(i[(1 - w) lift0 + w lift1]) and certifies by sampling
/// that for all w in U = [0,1] + disk(0, eta) it maps T_{r0} into D_{r1} and
/// T_{R0} outside D_{R1} (swapped for negative degree), with r0 = e^{-eps},
/// R0 = e^{eps}, R1 = sqrt(R0 e^{eps(rho+1)/2}), r1 = 1/R1.
inline HomotopyFamily build_homotopy(const CircleMap& map0, const CircleMap& map1,
                                     const HomotopyOptions& opt = {}) {
  if (map0.degree() != map1.degree()) {
    std::ostringstream os;
    os << "build_homotopy: degree mismatch (" << map0.degree() << " vs " << map1.degree() << ")";
    throw InvalidInput(os.str());
  }
  HomotopyFamily f;
  f.lift0 = lift(map0, opt.K);
  f.lift1 = lift(map1, opt.K);
  const int sign = map0.degree() > 0 ? 1 : -1;

  double eps = opt.epsilon.value_or(std::min(f.lift0.strip, f.lift1.strip));
  if (eps > std::min(f.lift0.strip, f.lift1.strip) * (1.0 + 1e-12)) {
    throw InvalidInput("build_homotopy: requested epsilon exceeds the lifts' analyticity strip");
  }

  for (; eps >= opt.min_epsilon; eps *= 0.5) {
    f.epsilon = eps;
    const auto inner = detail::sample_line(f, eps, opt.samples);    // |z| = e^{-eps}
    const auto outer = detail::sample_line(f, -eps, opt.samples);   // |z| = e^{eps}
    const auto middle = detail::sample_line(f, 0.0, opt.samples);

    double sup_diff = 0.0;
    for (std::size_t j = 0; j < middle.l0.size(); ++j) {
      sup_diff = std::max(sup_diff, std::abs(middle.l1[j] - middle.l0[j]));
    }

    std::vector<double> etas;
    if (opt.eta) {
      etas.push_back(*opt.eta);
    } else {
      for (double e = 0.5; e >= 1e-6; e *= 0.5) etas.push_back(e);
    }
    for (double eta : etas) {
      const double rho = std::min({detail::expansion_floor(inner, sign, eta),
                                   detail::expansion_floor(outer, sign, eta),
                                   detail::expansion_floor(middle, sign, eta)});
      if (!(rho > 1.0)) continue;
      const double eps_bar = eps * (rho - 1.0) / 2.0;
      if (eta * sup_diff > eps_bar) continue;

      const double log_R1 = 0.5 * (eps + eps * (rho + 1.0) / 2.0);
      double lo_in, hi_in, lo_out, hi_out;
      detail::log_modulus_range(inner, eta, lo_in, hi_in);
      detail::log_modulus_range(outer, eta, lo_out, hi_out);
      double inner_margin, outer_margin;
      if (sign > 0) {
        inner_margin = -log_R1 - hi_in;   // T(T_{r0}) inside D_{r1}
        outer_margin = lo_out - log_R1;   // T(T_{R0}) outside D_{R1}
      } else {
        inner_margin = lo_in - log_R1;
        outer_margin = -log_R1 - hi_out;
      }
      if (inner_margin <= 0.0 || outer_margin <= 0.0) continue;

      f.eta = eta;
      f.rho = rho;
      f.r0 = std::exp(-eps);
      f.R0 = std::exp(eps);
      f.R1 = std::exp(log_R1);
      f.r1 = 1.0 / f.R1;
      f.inner_margin = inner_margin;
      f.outer_margin = outer_margin;
      return f;
    }
    if (opt.epsilon) break;
  }
  throw NumericalFailure("build_homotopy: maps too wild for certified homotopy at this resolution");
}

struct AnnulusSearchOptions {
  int samples = 512;       ///< boundary samples per candidate circle
  int grid = 24;           ///< candidates per log-radius axis
  double s_min = 0.02;     ///< smallest |log radius|
  double s_max = 2.3;      ///< largest |log radius|
  double pole_margin = 0.02;
};

struct AnnulusSearchResult {
  Annulus annulus;
  Expansivity kind = Expansivity::none;
  double score = std::numeric_limits<double>::infinity();  ///< contraction ratio, < 1 when expansive
};

/// Grid search over r = e^{-s_in}, R = e^{s_out} minimizing the boundary
/// contraction ratio max(max_{T_r}|tau|/r, R/min_{T_R}|tau|) (A1) or its
/// swapped counterpart (A2). Candidates within pole_margin (relative) of a
/// pole or outside the map's domain are skipped.
inline AnnulusSearchResult find_annulus(const CircleMap& map, const AnnulusSearchOptions& opt = {}) {
  const auto known_poles = poles(map);
  const auto domain = holomorphy_domain(map);

  struct Circle {
    double radius;
    bool ok;
    double lo, hi;
  };
  const auto sample = [&](double radius) {
    Circle c{radius, true, std::numeric_limits<double>::infinity(), 0.0};
    if (domain && (radius < domain->r || radius > domain->R)) {
      c.ok = false;
      return c;
    }
    for (int j = 0; j < opt.samples && c.ok; ++j) {
      try {
        const double a = std::abs(eval(map, detail::circle_node(radius, j, opt.samples)));
        if (!std::isfinite(a)) c.ok = false;
        c.lo = std::min(c.lo, a);
        c.hi = std::max(c.hi, a);
      } catch (const DomainError&) {
        c.ok = false;
      }
    }
    return c;
  };

  std::vector<Circle> inner, outer;
  for (int i = 0; i < opt.grid; ++i) {
    const double s = opt.s_min + (opt.s_max - opt.s_min) * i / (opt.grid - 1);
    inner.push_back(sample(std::exp(-s)));
    outer.push_back(sample(std::exp(s)));
  }

  const auto clear_of_poles = [&](double r, double R) {
    if (!known_poles) return true;
    for (const auto& p : *known_poles) {
      const double a = std::abs(p);
      if (a >= r / (1.0 + opt.pole_margin) && a <= R * (1.0 + opt.pole_margin)) return false;
    }
    return true;
  };

  AnnulusSearchResult best;
  for (const auto& ci : inner) {
    for (const auto& co : outer) {
      if (!ci.ok || !co.ok || !clear_of_poles(ci.radius, co.radius)) continue;
      const double r = ci.radius, R = co.radius;
      const double a1 = std::max(ci.hi / r, R / co.lo);
      const double a2 = std::max(co.hi / r, R / ci.lo);
      if (a1 < best.score) best = {Annulus(r, R), Expansivity::A1, a1};
      if (a2 < best.score) best = {Annulus(r, R), Expansivity::A2, a2};
    }
  }
  if (!(best.score < 1.0)) {
    throw DomainError("find_annulus: no holomorphically expansive annulus found on the search grid");
  }
  const auto verdict = check_holo_expansive(map, best.annulus);
  if (verdict.kind != best.kind) {
    throw NumericalFailure("find_annulus: dense boundary check disagrees with the coarse search");
  }
  return best;
}

}  // namespace ruelle
