#pragma once

/// \file maps.hpp
/// Analytic expanding circle maps: Blaschke and anti-Blaschke products,
/// trigonometric lifts, the Möbius-type family z(2z - w)/(2 - wz), members of
/// a complexified homotopy, and compositions of these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ruelle/lift_series.hpp"
#include "ruelle/numerics.hpp"

namespace ruelle {

/// A = {r < |z| < R}.
struct Annulus {
  double r = 0.5;
  double R = 2.0;

  Annulus() = default;
  Annulus(double r_, double R_) : r(r_), R(R_) {
    if (!(r > 0.0) || !(R > r) || !std::isfinite(R)) {
      std::ostringstream os;
      os << "Annulus: need 0 < r < R < inf, got r=" << r << ", R=" << R;
      throw InvalidInput(os.str());
    }
  }

  bool contains_unit_circle() const noexcept { return r < 1.0 && 1.0 < R; }

  /// Closed annulus membership with relative slack.
  bool contains(Complex z, double slack = 0.0) const noexcept {
    const double a = std::abs(z);
    return a >= r * (1.0 - slack) && a <= R * (1.0 + slack);
  }
};

inline void require_circle_annulus(const Annulus& a, const char* who) {
  if (!a.contains_unit_circle()) {
    std::ostringstream os;
    os << who << ": annulus must satisfy r < 1 < R, got r=" << a.r << ", R=" << a.R;
    throw InvalidInput(os.str());
  }
}

/// alpha * prod_j (z - a_j)/(1 - conj(a_j) z); reciprocal when anti is set.
struct BlaschkeParams {
  Complex alpha{1.0, 0.0};
  std::vector<Complex> zeros;
  bool anti = false;
};

/// z -> z^d exp(i p(theta)) with p(theta) = sum_k cos_k cos(k theta) + sin_k sin(k theta),
/// coefficients indexed from k = 1. Entire on the punctured plane.
struct TrigLiftParams {
  int d = 2;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// T(w, z) = z (2z - w)/(2 - wz).
struct MobiusFamilyParams {
  Complex w{};
};

class CircleMap;

/// stages[0] applied first.
struct CompositionParams {
  std::vector<std::shared_ptr<const CircleMap>> stages;
};

enum class Orientation { preserving = 1, reversing = -1 };

/// Values with modulus above this are treated as the point at infinity when
/// composing maps.
inline constexpr double kInfinityThreshold = 1e100;

inline Complex complex_infinity() noexcept {
  return {std::numeric_limits<double>::infinity(), 0.0};
}

class CircleMap {
 public:
  using Params =
      std::variant<BlaschkeParams, TrigLiftParams, MobiusFamilyParams, HomotopyMember, CompositionParams>;

  explicit CircleMap(Params params);

  const Params& params() const noexcept { return params_; }
  int degree() const noexcept { return degree_; }
  int sign() const noexcept { return degree_ > 0 ? 1 : -1; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&params_);
  }

  Complex operator()(Complex z) const;

  std::string describe() const;

 private:
  Params params_;
  int degree_ = 0;
};

using CircleMapPtr = std::shared_ptr<const CircleMap>;

// ---------------------------------------------------------------------------
// Primitive evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline Complex blaschke_factor(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

inline Complex blaschke_factor_deriv(Complex a, Complex z) {
  const Complex den = 1.0 - std::conj(a) * z;
  return (1.0 - std::norm(a)) / (den * den);
}

/// B_a(z) without the anti reciprocal; infinity at a pole.
inline Complex blaschke_core(const BlaschkeParams& p, Complex z) {
  if (!is_finite(z)) {
    Complex value = p.alpha;
    for (const auto& a : p.zeros) {
      if (a == Complex{}) return complex_infinity();
      value *= -1.0 / std::conj(a);
    }
    return value;
  }
  Complex value = p.alpha;
  for (const auto& a : p.zeros) {
    if (1.0 - std::conj(a) * z == Complex{}) return complex_infinity();
    value *= blaschke_factor(a, z);
  }
  return value;
}

inline Complex blaschke_core_deriv(const BlaschkeParams& p, Complex z) {
  Complex sum{};
  const std::size_t d = p.zeros.size();
  for (std::size_t j = 0; j < d; ++j) {
    Complex term = blaschke_factor_deriv(p.zeros[j], z);
    for (std::size_t k = 0; k < d; ++k) {
      if (k != j) term *= blaschke_factor(p.zeros[k], z);
    }
    sum += term;
  }
  return p.alpha * sum;
}

/// tau for (anti-)Blaschke parameters without building a CircleMap.
inline Complex blaschke_value(const BlaschkeParams& p, Complex z) {
  const Complex b = blaschke_core(p, z);
  return p.anti ? 1.0 / b : b;
}

inline Complex blaschke_deriv(const BlaschkeParams& p, Complex z) {
  const Complex db = blaschke_core_deriv(p, z);
  if (!p.anti) return db;
  const Complex b = blaschke_core(p, z);
  return -db / (b * b);
}

inline Complex trig_phase(const TrigLiftParams& p, Complex z) {
  Complex sum{};
  for (std::size_t i = 0; i < p.cos_coeffs.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    sum += p.cos_coeffs[i] * 0.5 * (std::pow(z, k) + std::pow(z, -k));
  }
  for (std::size_t i = 0; i < p.sin_coeffs.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    sum += p.sin_coeffs[i] * (std::pow(z, k) - std::pow(z, -k)) / (2.0 * kI);
  }
  return sum;
}

inline Complex trig_phase_deriv(const TrigLiftParams& p, Complex z) {
  Complex sum{};
  for (std::size_t i = 0; i < p.cos_coeffs.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    sum += p.cos_coeffs[i] * 0.5 * k * (std::pow(z, k - 1) - std::pow(z, -k - 1));
  }
  for (std::size_t i = 0; i < p.sin_coeffs.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    sum += p.sin_coeffs[i] * static_cast<double>(k) * (std::pow(z, k - 1) + std::pow(z, -k - 1)) /
           (2.0 * kI);
  }
  return sum;
}

inline bool has_periodic_part(const TrigLiftParams& p) {
  for (double c : p.cos_coeffs) if (c != 0.0) return true;
  for (double c : p.sin_coeffs) if (c != 0.0) return true;
  return false;
}

inline Complex mobius_value(Complex w, Complex z) {
  if (!is_finite(z)) return complex_infinity();
  const Complex den = 2.0 - w * z;
  if (den == Complex{}) return complex_infinity();
  return z * (2.0 * z - w) / den;
}

inline Complex mobius_deriv(Complex w, Complex z) {
  const Complex den = 2.0 - w * z;
  return ((4.0 * z - w) * den + w * z * (2.0 * z - w)) / (den * den);
}

inline Complex normalize_sphere(Complex v) {
  if (!is_finite(v) || std::abs(v) > kInfinityThreshold) return complex_infinity();
  return v;
}

/// Evaluation on the Riemann sphere: poles and overflow map to infinity and
/// the point at infinity is accepted where the map extends there.
inline Complex sphere_eval(const CircleMap& map, Complex z);

}  // namespace detail

/// tau(z). Throws DomainError at poles of Blaschke, anti-Blaschke and Möbius
/// maps and outside the certified annulus of a homotopy member. Compositions
/// propagate through the Riemann sphere and return infinity instead.
inline Complex eval(const CircleMap& map, Complex z) {
  const auto pole = [&](const char* what) -> Complex {
    std::ostringstream os;
    os << "eval(" << what << "): pole hit at z = " << z;
    throw DomainError(os.str());
  };
  return std::visit(
      [&](const auto& p) -> Complex {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BlaschkeParams>) {
          const Complex b = detail::blaschke_core(p, z);
          if (!is_finite(b)) return pole("blaschke");
          if (!p.anti) return b;
          if (b == Complex{}) return pole("anti-blaschke");
          return 1.0 / b;
        } else if constexpr (std::is_same_v<T, TrigLiftParams>) {
          if (z == Complex{} && p.d > 0 && !detail::has_periodic_part(p)) return Complex{};
          if (z == Complex{} || !is_finite(z)) throw DomainError("eval(triglift): z must be finite and nonzero");
          return std::pow(z, p.d) * std::exp(kI * detail::trig_phase(p, z));
        } else if constexpr (std::is_same_v<T, MobiusFamilyParams>) {
          const Complex v = detail::mobius_value(p.w, z);
          if (!is_finite(v)) return pole("mobius");
          return v;
        } else if constexpr (std::is_same_v<T, HomotopyMember>) {
          return homotopy_eval(*p.family, p.w, z);
        } else {
          Complex v = z;
          for (const auto& stage : p.stages) {
            v = detail::sphere_eval(*stage, v);
          }
          return v;
        }
      },
      map.params());
}

inline Complex detail::sphere_eval(const CircleMap& map, Complex z) {
  if (const auto* b = map.as<BlaschkeParams>()) {
    const Complex v = blaschke_core(*b, z);
    if (!b->anti) return normalize_sphere(v);
    if (!is_finite(v)) return Complex{};
    if (v == Complex{}) return complex_infinity();
    return normalize_sphere(1.0 / v);
  }
  if (const auto* m = map.as<MobiusFamilyParams>()) return normalize_sphere(mobius_value(m->w, z));
  if (const auto* t = map.as<TrigLiftParams>()) {
    if (!has_periodic_part(*t)) {
      if (!is_finite(z)) return t->d > 0 ? complex_infinity() : Complex{};
      if (z == Complex{}) return t->d > 0 ? Complex{} : complex_infinity();
    }
  }
  if (!is_finite(z)) throw DomainError("eval: map has no extension to the point at infinity");
  return normalize_sphere(eval(map, z));
}

/// tau'(z) from the closed form of the representation.
inline Complex deriv(const CircleMap& map, Complex z) {
  return std::visit(
      [&](const auto& p) -> Complex {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BlaschkeParams>) {
          const Complex b = detail::blaschke_core(p, z);
          if (!is_finite(b)) throw DomainError("deriv(blaschke): pole hit");
          const Complex db = detail::blaschke_core_deriv(p, z);
          if (!p.anti) return db;
          if (b == Complex{}) throw DomainError("deriv(anti-blaschke): pole hit");
          return -db / (b * b);
        } else if constexpr (std::is_same_v<T, TrigLiftParams>) {
          if (z == Complex{} && p.d > 0 && !detail::has_periodic_part(p)) {
            return p.d == 1 ? Complex{1.0, 0.0} : Complex{};
          }
          if (z == Complex{} || !is_finite(z)) throw DomainError("deriv(triglift): z must be finite and nonzero");
          const Complex tau = std::pow(z, p.d) * std::exp(kI * detail::trig_phase(p, z));
          return tau * (static_cast<double>(p.d) / z + kI * detail::trig_phase_deriv(p, z));
        } else if constexpr (std::is_same_v<T, MobiusFamilyParams>) {
          if (2.0 - p.w * z == Complex{}) throw DomainError("deriv(mobius): pole hit");
          return detail::mobius_deriv(p.w, z);
        } else if constexpr (std::is_same_v<T, HomotopyMember>) {
          return homotopy_deriv(*p.family, p.w, z);
        } else {
          Complex v = z;
          Complex slope{1.0, 0.0};
          for (const auto& stage : p.stages) {
            if (!is_finite(v)) throw DomainError("deriv(composition): orbit reached infinity");
            slope *= deriv(*stage, v);
            v = detail::sphere_eval(*stage, v);
          }
          return slope;
        }
      },
      map.params());
}

inline Complex CircleMap::operator()(Complex z) const { return eval(*this, z); }

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

/// Winding number of tau around 0 along the unit circle.
inline int winding_degree(const CircleMap& map) {
  try {
    const Complex w = circle_integral_resolved(
        [&](Complex z) { return deriv(map, z) / eval(map, z); }, 1.0, 256, 1e-12, 1e-12);
    const double rounded = std::round(w.real());
    const double residual = std::abs(w - Complex{rounded, 0.0});
    if (residual >= 1e-6) {
      std::ostringstream os;
      os << "degree: winding integral " << w
         << " is not an integer; map does not preserve circle or quadrature unresolved";
      throw DomainError(os.str());
    }
    return static_cast<int>(rounded);
  } catch (const InvalidInput& e) {
    throw DomainError(std::string("degree: map does not preserve circle or quadrature unresolved (") +
                      e.what() + ")");
  } catch (const ResolutionError& e) {
    throw DomainError(std::string("degree: map does not preserve circle or quadrature unresolved (") +
                      e.what() + ")");
  }
}

inline void validate(const BlaschkeParams& p) {
  if (p.zeros.size() < 2) throw InvalidInput("blaschke: need at least two zeros (degree >= 2)");
  if (!is_finite(p.alpha) || std::abs(std::abs(p.alpha) - 1.0) > 1e-12) {
    throw InvalidInput("blaschke: |alpha| must equal 1");
  }
  for (const auto& a : p.zeros) {
    if (!is_finite(a) || !(std::abs(a) < 1.0)) {
      std::ostringstream os;
      os << "blaschke: zero " << a << " must lie in the open unit disk";
      throw InvalidInput(os.str());
    }
  }
}

inline void validate(const TrigLiftParams& p) {
  if (std::abs(p.d) < 2) throw InvalidInput("triglift: |d| must be at least 2");
  for (double c : p.cos_coeffs) if (!std::isfinite(c)) throw InvalidInput("triglift: non-finite coefficient");
  for (double c : p.sin_coeffs) if (!std::isfinite(c)) throw InvalidInput("triglift: non-finite coefficient");
}

inline void validate(const MobiusFamilyParams& p) {
  if (!is_finite(p.w)) throw InvalidInput("mobius: w must be finite");
}

inline void validate(const HomotopyMember& m) {
  if (!m.family) throw InvalidInput("homotopy member: missing family");
  if (!is_finite(m.w) || !m.family->contains_parameter(m.w)) {
    std::ostringstream os;
    os << "homotopy member: w = " << m.w << " outside the certified parameter set (eta = "
       << m.family->eta << ")";
    throw DomainError(os.str());
  }
}

inline void validate(const CompositionParams& c) {
  if (c.stages.empty()) throw InvalidInput("composition: no stages");
  for (const auto& s : c.stages) if (!s) throw InvalidInput("composition: null stage");
}

}  // namespace detail

inline CircleMap::CircleMap(Params params) : params_(std::move(params)) {
  std::visit([](const auto& p) { detail::validate(p); }, params_);
  if (const auto* c = as<CompositionParams>()) {
    degree_ = 1;
    for (const auto& s : c->stages) degree_ *= s->degree();
  } else if (const auto* t = as<TrigLiftParams>()) {
    degree_ = t->d;
  } else {
    degree_ = detail::winding_degree(*this);
  }
}

inline std::string CircleMap::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BlaschkeParams>) {
          os << (p.anti ? "anti-blaschke" : "blaschke") << "(alpha=" << p.alpha << ", zeros=[";
          for (std::size_t i = 0; i < p.zeros.size(); ++i) os << (i ? ", " : "") << p.zeros[i];
          os << "])";
        } else if constexpr (std::is_same_v<T, TrigLiftParams>) {
          os << "triglift(d=" << p.d << ", cos=" << p.cos_coeffs.size() << " terms, sin="
             << p.sin_coeffs.size() << " terms)";
        } else if constexpr (std::is_same_v<T, MobiusFamilyParams>) {
          os << "mobius(w=" << p.w << ")";
        } else if constexpr (std::is_same_v<T, HomotopyMember>) {
          os << "homotopy(w=" << p.w << ")";
        } else {
          os << "composition(" << p.stages.size() << " stages)";
        }
      },
      params_);
  return os.str();
}

inline CircleMap blaschke(Complex alpha, std::vector<Complex> zeros) {
  return CircleMap(BlaschkeParams{alpha, std::move(zeros), false});
}

/// 1 / B_a.
inline CircleMap anti_blaschke(Complex alpha, std::vector<Complex> zeros) {
  return CircleMap(BlaschkeParams{alpha, std::move(zeros), true});
}

inline CircleMap trig_lift(int d, std::vector<double> cos_coeffs = {}, std::vector<double> sin_coeffs = {}) {
  return CircleMap(TrigLiftParams{d, std::move(cos_coeffs), std::move(sin_coeffs)});
}

/// Optionally checks that the pole 2/w stays off the closed annulus.
inline CircleMap mobius(Complex w, std::optional<Annulus> annulus = std::nullopt) {
  if (annulus && w != Complex{}) {
    const double p = std::abs(2.0 / w);
    if (p >= annulus->r * (1.0 - 1e-6) && p <= annulus->R * (1.0 + 1e-6)) {
      std::ostringstream os;
      os << "mobius: pole 2/w at modulus " << p << " lies on the annulus [" << annulus->r << ", "
         << annulus->R << "]";
      throw DomainError(os.str());
    }
  }
  return CircleMap(MobiusFamilyParams{w});
}

inline CircleMap homotopy_member(std::shared_ptr<const HomotopyFamily> family, Complex w) {
  return CircleMap(HomotopyMember{std::move(family), w});
}

/// outer after inner.
inline CircleMap compose(const CircleMap& outer, const CircleMap& inner) {
  CompositionParams c;
  c.stages = {std::make_shared<const CircleMap>(inner), std::make_shared<const CircleMap>(outer)};
  return CircleMap(std::move(c));
}

/// n-fold self-composition.
inline CircleMap iterate(const CircleMap& map, int n) {
  if (n < 1) throw InvalidInput("iterate: n must be at least 1");
  if (n == 1) return map;
  auto shared = std::make_shared<const CircleMap>(map);
  CompositionParams c;
  c.stages.assign(static_cast<std::size_t>(n), shared);
  return CircleMap(std::move(c));
}

/// B* = z (2z - 1)/(2 - z), the reference Blaschke product with zeros {0, 1/2}.
inline CircleMap reference_blaschke() { return blaschke(1.0, {0.0, 0.5}); }

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

inline int degree(const CircleMap& map) { return map.degree(); }

inline int orientation(const CircleMap& map) {
  if (std::abs(map.degree()) < 2) {
    std::ostringstream os;
    os << "orientation: unsupported map of degree " << map.degree() << " (need |d| >= 2)";
    throw InvalidInput(os.str());
  }
  return map.sign();
}

/// Finite poles of the map, or nullopt when they are not tracked (compositions,
/// homotopy members).
inline std::optional<std::vector<Complex>> poles(const CircleMap& map) {
  if (const auto* b = map.as<BlaschkeParams>()) {
    std::vector<Complex> out;
    for (const auto& a : b->zeros) {
      if (b->anti) {
        out.push_back(a);
      } else if (a != Complex{}) {
        out.push_back(1.0 / std::conj(a));
      }
    }
    return out;
  }
  if (const auto* m = map.as<MobiusFamilyParams>()) {
    if (m->w == Complex{}) return std::vector<Complex>{};
    return std::vector<Complex>{2.0 / m->w};
  }
  if (const auto* t = map.as<TrigLiftParams>()) {
    if (!detail::has_periodic_part(*t) && t->d < 0) return std::vector<Complex>{0.0};
    return std::vector<Complex>{};
  }
  return std::nullopt;
}

/// Largest annulus on which the representation is defined, if restricted.
inline std::optional<Annulus> holomorphy_domain(const CircleMap& map) {
  if (const auto* h = map.as<HomotopyMember>()) return Annulus(h->family->r0, h->family->R0);
  return std::nullopt;
}

inline double min_expansion(const CircleMap& map, int samples = 4096) {
  if (samples < 256) throw InvalidInput("min_expansion: samples must be at least 256");
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    best = std::min(best, std::abs(deriv(map, detail::circle_node(1.0, j, samples))));
  }
  return best;
}

/// max ||tau(z)| - 1| over sampled z on the unit circle.
inline double circle_deviation(const CircleMap& map, int samples = 4096) {
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    worst = std::max(worst, std::abs(std::abs(eval(map, detail::circle_node(1.0, j, samples))) - 1.0));
  }
  return worst;
}

enum class Expansivity { A1, A2, none };

inline const char* to_string(Expansivity e) {
  switch (e) {
    case Expansivity::A1: return "A1";
    case Expansivity::A2: return "A2";
    default: return "none";
  }
}

struct ExpansivityVerdict {
  Expansivity kind = Expansivity::none;
  /// Smallest slack of the two boundary inclusions for the reported case (or
  /// the better case when neither holds, then negative).
  double margin = 0.0;
  double max_inner = 0.0, min_inner = 0.0;  ///< extremes of |tau| on T_r
  double max_outer = 0.0, min_outer = 0.0;  ///< extremes of |tau| on T_R
  std::string reason;
};

/// Samples tau on both boundary circles and tests the A1 inclusions
/// tau(T_r) in D_r, tau(T_R) outside closed D_R, and the swapped A2 pair.
/// Known poles on the closed annulus give `none`.
inline ExpansivityVerdict check_holo_expansive(const CircleMap& map, const Annulus& annulus,
                                               int samples = 4096) {
  if (samples < 256) throw InvalidInput("check_holo_expansive: samples must be at least 256");
  ExpansivityVerdict v;
  if (auto dom = holomorphy_domain(map)) {
    if (annulus.r < dom->r * (1.0 - 1e-12) || annulus.R > dom->R * (1.0 + 1e-12)) {
      v.margin = -1.0;
      v.reason = "annulus exceeds the map's domain of holomorphy";
      return v;
    }
  }
  if (auto ps = poles(map)) {
    for (const auto& p : *ps) {
      if (annulus.contains(p)) {
        v.margin = -1.0;
        std::ostringstream os;
        os << "pole at " << p << " inside the closed annulus";
        v.reason = os.str();
        return v;
      }
    }
  }
  const auto extremes = [&](double radius, double& lo, double& hi) -> bool {
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int j = 0; j < samples; ++j) {
      Complex t;
      try {
        t = eval(map, detail::circle_node(radius, j, samples));
      } catch (const DomainError&) {
        return false;
      }
      // Infinity is a legitimate value for iterates evaluated on the sphere.
      const double a = std::abs(t);
      if (std::isnan(a)) return false;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    return true;
  };
  if (!extremes(annulus.r, v.min_inner, v.max_inner) || !extremes(annulus.R, v.min_outer, v.max_outer)) {
    v.margin = -1.0;
    v.reason = "map undefined on a boundary circle";
    return v;
  }
  const double m1 = std::min(annulus.r - v.max_inner, v.min_outer - annulus.R);
  const double m2 = std::min(v.min_inner - annulus.R, annulus.r - v.max_outer);
  if (m1 > 0.0) {
    v.kind = Expansivity::A1;
    v.margin = m1;
  } else if (m2 > 0.0) {
    v.kind = Expansivity::A2;
    v.margin = m2;
  } else {
    v.margin = std::max(m1, m2);
    v.reason = "boundary inclusions fail";
  }
  return v;
}

struct FixedPoint {
  Complex z0;
  Complex mu;
};

/// Interior fixed point by forward iteration from 0 followed by Newton.
inline FixedPoint fixed_point_disk(const CircleMap& map) {
  Complex z{};
  bool settled = false;
  for (int k = 0; k < 10000; ++k) {
    const Complex next = eval(map, z);
    if (!is_finite(next) || std::abs(next) > 1e6) break;
    const double step = std::abs(next - z);
    z = next;
    if (step < 1e-12) {
      settled = true;
      break;
    }
  }
  if (!settled || std::abs(z) >= 1.0) {
    throw NumericalFailure("fixed_point_disk: no attracting interior fixed point located");
  }
  for (int k = 0; k < 50; ++k) {
    const Complex f = eval(map, z) - z;
    if (std::abs(f) < 1e-15) break;
    const Complex df = deriv(map, z) - 1.0;
    if (df == Complex{}) break;
    z -= f / df;
  }
  if (std::abs(eval(map, z) - z) > 1e-13 || std::abs(z) >= 1.0) {
    throw NumericalFailure("fixed_point_disk: Newton refinement did not reach 1e-13");
  }
  return {z, deriv(map, z)};
}

/// For tau = 1/B_a: the second iterate equals B_{conj a} o B_a (with conjugated
/// alpha); returns |B_a'(z0)| at its interior fixed point z0.
inline double second_iterate_multiplier(const BlaschkeParams& params) {
  if (!params.anti) throw InvalidInput("second_iterate_multiplier: expects an anti-Blaschke product");
  const CircleMap inner = blaschke(params.alpha, params.zeros);
  std::vector<Complex> conj_zeros;
  for (const auto& a : params.zeros) conj_zeros.push_back(std::conj(a));
  const CircleMap outer = blaschke(std::conj(params.alpha), conj_zeros);
  const FixedPoint fp = fixed_point_disk(compose(outer, inner));
  return std::abs(deriv(inner, fp.z0));
}

/// Multiplier that parametrizes the spectrum: the interior fixed-point
/// multiplier for orientation-preserving maps, the square root of the second
/// iterate multiplier for anti-Blaschke products.
inline Complex spectral_multiplier(const CircleMap& map) {
  if (const auto* b = map.as<BlaschkeParams>(); b && b->anti) return second_iterate_multiplier(*b);
  return fixed_point_disk(map).mu;
}

}  // namespace ruelle
