#pragma once

/// \file operators.hpp
/// Truncated adjoint transfer operator as a block matrix on
/// H^2(D_r) (+) H^2_0(D_R^inf), the primal transfer operator for rational
/// maps, and the boundary pairing between the two.
///
/// Basis convention: e_n^{(rho)}(z) = z^n / rho^n. Plus block: e_m^{(r)},
/// m = 0..Nplus-1. Minus block: e_{-m}^{(R)}, m = 1..Nminus. Rows and columns
/// list the plus block first.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ruelle/maps.hpp"
#include "ruelle/numerics.hpp"

namespace ruelle {

struct TruncatedOperator {
  Annulus annulus;
  int omega = 1;
  int Nplus = 0;
  int Nminus = 0;
  int K = 0;
  Eigen::MatrixXcd matrix;

  int size() const noexcept { return Nplus + Nminus; }
  Complex trace() const { return matrix.trace(); }
};

/// Coefficients on e_m^{(r)} (m = 0, 1, ...) and e_{-m}^{(R)} (m = 1, 2, ...).
struct HardyPair {
  std::vector<Complex> plus;
  std::vector<Complex> minus;  ///< minus[m - 1] multiplies e_{-m}^{(R)}

  double norm() const {
    double s = 0.0;
    for (const auto& c : plus) s += std::norm(c);
    for (const auto& c : minus) s += std::norm(c);
    return std::sqrt(s);
  }

  static HardyPair plus_basis(int m) {
    HardyPair h;
    h.plus.assign(static_cast<std::size_t>(m + 1), Complex{});
    h.plus.back() = 1.0;
    return h;
  }

  static HardyPair minus_basis(int m) {
    HardyPair h;
    h.minus.assign(static_cast<std::size_t>(m), Complex{});
    h.minus.back() = 1.0;
    return h;
  }
};

/// Fourier coefficients below this fraction of a column's peak are dropped.
inline constexpr double kAssemblyChop = 1e-14;

/// Builds the (Nplus + Nminus)^2 matrix of the adjoint transfer operator.
///
/// Orientation preserving (A1): plus inputs e_n^{(r)} o tau are sampled on
/// T_r and minus inputs on T_R; orientation reversing (A2) swaps the circles.
/// From data g on the circle of radius rho the output plus coefficient at m
/// is g_m (r/rho)^m and the output minus coefficient at m is g_{-m} (rho/R)^m.
/// Both cases use the same sign; the orientation enters only through the
/// choice of circles.
inline TruncatedOperator assemble_dual(const CircleMap& map, const Annulus& annulus, int Nplus, int Nminus,
                                       int K) {
  if (Nplus < 1 || Nminus < 1) throw InvalidInput("assemble_dual: Nplus and Nminus must be positive");
  detail::require_samples(K, 8 * std::max(Nplus, Nminus), "assemble_dual");
  require_circle_annulus(annulus, "assemble_dual");

  const auto verdict = check_holo_expansive(map, annulus);
  if (verdict.kind == Expansivity::none) {
    std::ostringstream os;
    os << "assemble_dual: " << map.describe() << " is not holomorphically expansive on A(" << annulus.r
       << ", " << annulus.R << "): " << verdict.reason << " (margin " << verdict.margin << ")";
    throw DomainError(os.str());
  }
  const int omega = verdict.kind == Expansivity::A1 ? 1 : -1;
  if (omega != map.sign()) {
    throw DomainError("assemble_dual: boundary inclusions disagree with the map's orientation");
  }

  const double r = annulus.r, R = annulus.R;
  const double rho_plus = omega > 0 ? r : R;
  const double rho_minus = omega > 0 ? R : r;

  const auto tau_samples = [&](double radius) {
    std::vector<Complex> t(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
      t[static_cast<std::size_t>(j)] = eval(map, detail::circle_node(radius, j, K));
      if (!is_finite(t[static_cast<std::size_t>(j)])) {
        throw DomainError("assemble_dual: map not finite on a boundary circle");
      }
    }
    return t;
  };
  const auto tau_plus = tau_samples(rho_plus);
  const auto tau_minus = tau_samples(rho_minus);

  TruncatedOperator T;
  T.annulus = annulus;
  T.omega = omega;
  T.Nplus = Nplus;
  T.Nminus = Nminus;
  T.K = K;
  T.matrix = Eigen::MatrixXcd::Zero(Nplus + Nminus, Nplus + Nminus);

  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  const auto fill_column = [&](int col, const std::vector<Complex>& values, double rho) {
    fft.fwd(spectrum, values);
    FourierData data(rho, [&] {
      std::vector<Complex> raw(spectrum);
      for (auto& c : raw) c /= static_cast<double>(K);
      return raw;
    }());
    const double peak = data.max_abs();
    const double tail = data.tail_ratio() * peak;
    if (tail > kFourierTailTolerance * std::max(peak, 1.0)) {
      std::ostringstream os;
      os << "assemble_dual: column " << col << " unresolved at K=" << K << " (tail " << tail << ")";
      throw ResolutionError(os.str(), 2 * K);
    }
    const double cut = kAssemblyChop * peak;
    for (int m = 0; m < Nplus; ++m) {
      const Complex c = data[m];
      if (std::abs(c) > cut) T.matrix(m, col) = c * std::pow(r / rho, m);
    }
    for (int m = 1; m <= Nminus; ++m) {
      const Complex c = data[-m];
      if (std::abs(c) > cut) T.matrix(Nplus + m - 1, col) = c * std::pow(rho / R, m);
    }
  };

  std::vector<Complex> power(static_cast<std::size_t>(K), Complex{1.0, 0.0});
  for (int n = 0; n < Nplus; ++n) {
    fill_column(n, power, rho_plus);
    for (int j = 0; j < K; ++j) power[static_cast<std::size_t>(j)] *= tau_plus[static_cast<std::size_t>(j)] / r;
  }
  std::vector<Complex> inv_power(static_cast<std::size_t>(K), Complex{1.0, 0.0});
  for (int n = 1; n <= Nminus; ++n) {
    for (int j = 0; j < K; ++j) {
      inv_power[static_cast<std::size_t>(j)] *= R / tau_minus[static_cast<std::size_t>(j)];
    }
    fill_column(Nplus + n - 1, inv_power, rho_minus);
  }
  return T;
}

/// Doubles K from default_samples until assembly is resolved.
inline TruncatedOperator assemble_dual(const CircleMap& map, const Annulus& annulus, int Nplus, int Nminus) {
  for (int K = default_samples(std::max(Nplus, Nminus)); K <= (1 << 16); K *= 2) {
    try {
      return assemble_dual(map, annulus, Nplus, Nminus, K);
    } catch (const ResolutionError&) {
    }
  }
  throw ResolutionError("assemble_dual: unresolved up to K=65536", 1 << 17);
}

inline HardyPair apply(const TruncatedOperator& T, const HardyPair& h) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(T.size());
  for (std::size_t m = 0; m < h.plus.size() && static_cast<int>(m) < T.Nplus; ++m) v(m) = h.plus[m];
  for (std::size_t m = 0; m < h.minus.size() && static_cast<int>(m) < T.Nminus; ++m) {
    v(T.Nplus + static_cast<int>(m)) = h.minus[m];
  }
  const Eigen::VectorXcd out = T.matrix * v;
  HardyPair result;
  result.plus.assign(out.data(), out.data() + T.Nplus);
  result.minus.assign(out.data() + T.Nplus, out.data() + T.size());
  return result;
}

/// Singular values in decreasing order.
inline std::vector<double> singular_values(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline std::vector<double> singular_values(const TruncatedOperator& T) { return singular_values(T.matrix); }

/// Matrix of the embedding H^2(D_r) -> H^2(D_{r'}) for r' < r on the first n
/// basis vectors: e_k^{(r)} = (r'/r)^k e_k^{(r')}.
inline Eigen::MatrixXcd hardy_embedding(double r, double r_prime, int n) {
  if (!(r_prime > 0.0 && r_prime < r)) throw InvalidInput("hardy_embedding: need 0 < r' < r");
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) J(k, k) = std::pow(r_prime / r, k);
  return J;
}

// ---------------------------------------------------------------------------
// Primal transfer operator
// ---------------------------------------------------------------------------

namespace detail {

/// Coefficients (ascending) of prod_j (x - roots_j) scaled by c.
inline std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots, Complex c) {
  std::vector<Complex> p{c};
  for (const auto& root : roots) {
    std::vector<Complex> q(p.size() + 1, Complex{});
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= root * p[i];
    }
    p = std::move(q);
  }
  return p;
}

/// Roots of sum_i p_i x^i via companion-matrix eigenvalues.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& p) {
  const int d = static_cast<int>(p.size()) - 1;
  const Complex lead = p.back();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -p[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("poly_roots: companion eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace detail

/// The d preimages of z under a (anti-)Blaschke product, polished by Newton.
inline std::vector<Complex> preimages(const BlaschkeParams& params, Complex z) {
  if (params.anti && z == Complex{}) throw DomainError("preimages: z = 0 is not attained by an anti-Blaschke map");
  const Complex target = params.anti ? 1.0 / z : z;
  // alpha P(x) - target Q(x) with P = prod (x - a_j), Q = prod (1 - conj(a_j) x).
  std::vector<Complex> conj_roots;
  Complex q_scale{1.0, 0.0};
  for (const auto& a : params.zeros) {
    if (a != Complex{}) {
      conj_roots.push_back(1.0 / std::conj(a));
      q_scale *= -std::conj(a);
    }
  }
  auto p = detail::poly_from_roots(params.zeros, params.alpha);
  const auto q = detail::poly_from_roots(conj_roots, q_scale);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] -= target * q[i];
  if (std::abs(p.back()) < 1e-12 * std::max(1.0, std::abs(target))) {
    throw NumericalFailure("transfer_apply_rational: degenerate preimage (root at infinity)");
  }
  auto roots = detail::poly_roots(p);
  for (auto& x : roots) {
    for (int it = 0; it < 8; ++it) {
      const Complex f = detail::blaschke_value(params, x) - z;
      const Complex df = detail::blaschke_deriv(params, x);
      if (df == Complex{} || std::abs(f) < 1e-16 * std::max(1.0, std::abs(z))) break;
      x -= f / df;
    }
  }
  return roots;
}

/// (L f)(z) = omega sum_k f(phi_k(z)) / tau'(phi_k(z)) over the d preimages.
template <class F>
Complex transfer_apply_rational(const BlaschkeParams& params, F&& f, Complex z) {
  const auto roots = preimages(params, z);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double residual = std::abs(detail::blaschke_value(params, roots[i]) - z);
    if (!(residual < 1e-10 * std::max(1.0, std::abs(z)))) {
      std::ostringstream os;
      os << "transfer_apply_rational: preimage residual " << residual << " exceeds 1e-10";
      throw NumericalFailure(os.str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(roots[i] - roots[j]) < 1e-7) {
        throw NumericalFailure("transfer_apply_rational: degenerate preimage (z near a critical value)");
      }
    }
  }
  Complex sum{};
  for (const auto& x : roots) sum += f(x) / detail::blaschke_deriv(params, x);
  return (params.anti ? -1.0 : 1.0) * sum;
}

inline Complex transfer_apply_rational(const BlaschkeParams& params, const LaurentSeries& f, Complex z) {
  return transfer_apply_rational(params, [&](Complex x) { return f(x); }, z);
}

// ---------------------------------------------------------------------------
// Pairing
// ---------------------------------------------------------------------------

namespace detail {

inline Complex plus_part(const HardyPair& h, double r, Complex z) {
  Complex s{}, p{1.0, 0.0};
  for (const auto& c : h.plus) {
    s += c * p;
    p *= z / r;
  }
  return s;
}

inline Complex minus_part(const HardyPair& h, double R, Complex z) {
  Complex s{}, p{1.0, 0.0};
  for (const auto& c : h.minus) {
    p *= R / z;
    s += c * p;
  }
  return s;
}

inline int pairing_samples(const HardyPair& h, int extra) {
  const int n = static_cast<int>(std::max(h.plus.size(), h.minus.size())) + extra;
  return next_power_of_two(std::max(256, 4 * n));
}

}  // namespace detail

/// l(f) = (1/2 pi i) oint_{T_r} f h_plus dz + (1/2 pi i) oint_{T_R} f h_minus dz,
/// with f given separately on the two circles.
template <class Fin, class Fout>
Complex pairing_parts(const HardyPair& h, Fin&& f_inner, Fout&& f_outer, const Annulus& annulus, int K) {
  const Complex a = circle_integral([&](Complex z) { return f_inner(z) * detail::plus_part(h, annulus.r, z); },
                                    annulus.r, K);
  const Complex b = circle_integral(
      [&](Complex z) { return f_outer(z) * detail::minus_part(h, annulus.R, z); }, annulus.R, K);
  return a + b;
}

inline Complex pairing(const HardyPair& h, const LaurentSeries& f, const Annulus& annulus) {
  const int span = static_cast<int>(f.coeffs.size()) + std::abs(f.first);
  const int K = detail::pairing_samples(h, span);
  const auto fn = [&](Complex z) { return f(z); };
  return pairing_parts(h, fn, fn, annulus, K);
}

struct DualityOptions {
  int max_plus = 3;   ///< h ranges over e_0^{(r)}..e_{max_plus}^{(r)}
  int max_minus = 3;  ///< and e_{-1}^{(R)}..e_{-max_minus}^{(R)}
  int max_power = 4;  ///< f ranges over z^k, |k| <= max_power
  int K = 256;        ///< samples for projecting L f on each boundary circle
};

/// max |l_{L^dagger h}(f) - l_h(L f)| over low-order basis pairs. L f is
/// evaluated through the preimage formula and projected onto a Laurent series
/// by fourier_coeffs on each boundary circle.
inline double duality_residual(const BlaschkeParams& params, const Annulus& annulus, int N,
                               const DualityOptions& opt = {}) {
  const CircleMap map(params);
  const TruncatedOperator T = assemble_dual(map, annulus, N, N);

  std::vector<HardyPair> hs;
  for (int m = 0; m <= opt.max_plus; ++m) hs.push_back(HardyPair::plus_basis(m));
  for (int m = 1; m <= opt.max_minus; ++m) hs.push_back(HardyPair::minus_basis(m));

  double worst = 0.0;
  for (int k = -opt.max_power; k <= opt.max_power; ++k) {
    const LaurentSeries f = LaurentSeries::monomial(k);
    const auto Lf = [&](Complex z) { return transfer_apply_rational(params, f, z); };
    const LaurentSeries Lf_inner = LaurentSeries::from_fourier(fourier_coeffs(Lf, annulus.r, opt.K));
    const LaurentSeries Lf_outer = LaurentSeries::from_fourier(fourier_coeffs(Lf, annulus.R, opt.K));
    for (const auto& h : hs) {
      const Complex lhs = pairing(apply(T, h), f, annulus);
      const Complex rhs = pairing_parts(
          h, [&](Complex z) { return Lf_inner(z); }, [&](Complex z) { return Lf_outer(z); }, annulus,
          detail::pairing_samples(h, opt.K));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace ruelle
