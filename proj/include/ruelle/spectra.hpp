#pragma once

/// \file spectra.hpp
/// Eigenvalues of truncated operators, truncation-doubling convergence
/// control, the counting function, and eigenvalue decay fits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ruelle/maps.hpp"
#include "ruelle/operators.hpp"

namespace ruelle {

struct Spectrum {
  std::vector<Complex> eigenvalues;  ///< decreasing modulus, ties by increasing argument
  int converged_count = 0;
  int Nplus = 0;
  int Nminus = 0;
  int K = 0;
  double tolerance = 0.0;  ///< matching tolerance used for converged_count
  std::string warning;

  std::vector<Complex> converged() const {
    const auto n = std::min<std::size_t>(eigenvalues.size(), static_cast<std::size_t>(converged_count));
    return {eigenvalues.begin(), eigenvalues.begin() + static_cast<std::ptrdiff_t>(n)};
  }
};

/// Sorts by decreasing modulus; entries whose moduli agree to 1e-9 (relative)
/// are ordered by increasing argument in (-pi, pi]. Imaginary parts below
/// 1e-12 of the modulus count as zero, so rounding noise cannot move a
/// negative real eigenvalue to -pi.
inline double tie_argument(Complex z) {
  if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) return z.real() < 0.0 ? kPi : 0.0;
  return std::arg(z);
}

inline void sort_spectrum(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    const double m = std::abs(values[start]);
    while (end < values.size() && m - std::abs(values[end]) <= 1e-9 * std::max(m, 1e-3)) ++end;
    std::sort(values.begin() + static_cast<std::ptrdiff_t>(start), values.begin() + static_cast<std::ptrdiff_t>(end),
              [](Complex a, Complex b) { return tie_argument(a) < tie_argument(b); });
    start = end;
  }
}

/// All eigenvalues of the matrix, sorted. The solver runs on the transpose:
/// maps fixing 0 and infinity assemble to lower-triangular blocks, whose
/// transpose passes through the Hessenberg and Schur stages untouched, so the
/// diagonal is returned exactly instead of being perturbed by Jordan blocks.
inline Spectrum eigenvalues(const TruncatedOperator& T) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T.matrix.transpose(), false);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T.matrix);
    const auto& s = svd.singularValues();
    std::ostringstream os;
    os << "eigenvalues: eigensolver failed on a " << T.size() << "x" << T.size()
       << " matrix (condition estimate " << s(0) / s(s.size() - 1) << ")";
    throw NumericalFailure(os.str());
  }
  Spectrum s;
  const auto& ev = es.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  sort_spectrum(s.eigenvalues);
  s.converged_count = static_cast<int>(s.eigenvalues.size());
  s.Nplus = T.Nplus;
  s.Nminus = T.Nminus;
  s.K = T.K;
  return s;
}

/// Number of leading entries of `a` matched (greedy nearest neighbour) by
/// distinct entries of `b` within tol.
inline int leading_matches(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  std::vector<bool> used(b.size(), false);
  int count = 0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    if (best == b.size() || dist > tol) break;
    used[best] = true;
    ++count;
  }
  return count;
}

struct ConvergenceOptions {
  int N0 = 32;
  int Nmax = 256;
};

/// Assembles at N and 2N (N = N0, 2 N0, ... up to Nmax) until every entry
/// above 10 tol is matched between consecutive truncations.
inline Spectrum converged_spectrum(const CircleMap& map, const Annulus& annulus, double tol,
                                   const ConvergenceOptions& opt = {}) {
  if (!(tol > 0.0)) throw InvalidInput("converged_spectrum: tol must be positive");
  if (opt.N0 < 2 || opt.Nmax < 2 * opt.N0) throw InvalidInput("converged_spectrum: need 2 <= N0 and 2 N0 <= Nmax");
  Spectrum previous = eigenvalues(assemble_dual(map, annulus, opt.N0, opt.N0));
  for (int N = 2 * opt.N0; N <= opt.Nmax; N *= 2) {
    Spectrum current = eigenvalues(assemble_dual(map, annulus, N, N));
    int matched = leading_matches(previous.eigenvalues, current.eigenvalues, tol);
    const auto settled_by_size = matched == static_cast<int>(previous.eigenvalues.size());
    const auto floor_reached =
        !settled_by_size && std::abs(previous.eigenvalues[static_cast<std::size_t>(matched)]) < 10.0 * tol;
    // Never split a cluster of equal moduli (a +-lambda or conjugate pair).
    const auto& cur = current.eigenvalues;
    while (matched > 0 && matched < static_cast<int>(cur.size()) &&
           std::abs(cur[static_cast<std::size_t>(matched)]) >= 10.0 * tol &&
           std::abs(cur[static_cast<std::size_t>(matched)]) >= (1.0 - 1e-3) * std::abs(cur[static_cast<std::size_t>(matched) - 1])) {
      --matched;
    }
    current.converged_count = matched;
    current.tolerance = tol;
    if (settled_by_size || floor_reached) return current;
    if (2 * N > opt.Nmax) {
      std::ostringstream os;
      os << "converged_spectrum: not converged at N=" << N << "; " << matched
         << " leading eigenvalues stable to " << tol;
      current.warning = os.str();
      return current;
    }
    previous = std::move(current);
  }
  return previous;
}

/// N(t) = #{converged eigenvalues with modulus >= t}.
inline int counting_function(const Spectrum& s, double threshold) {
  if (!(threshold > 0.0)) throw InvalidInput("counting_function: threshold must be positive");
  if (threshold < 10.0 * s.tolerance) {
    std::ostringstream os;
    os << "counting_function: threshold " << threshold << " is below the convergence floor "
       << 10.0 * s.tolerance << " (10 x matching tolerance)";
    throw InvalidInput(os.str());
  }
  int count = 0;
  for (const auto& z : s.converged()) {
    if (std::abs(z) >= threshold) ++count;
  }
  return count;
}

struct DecayFit {
  double beta = 0.0;
  double c = 0.0;
  double r2 = 0.0;
  int first_index = 0;  ///< 1-based positions of the entries used
  int last_index = 0;
  int used = 0;
};

/// 1-based positions n with 10 tol <= |lambda_n| < 1 among converged entries
/// (any nonzero entry when tol is zero).
inline std::vector<int> usable_decay_indices(const Spectrum& s) {
  std::vector<int> out;
  const auto values = s.converged();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    const bool above_floor = s.tolerance > 0.0 ? a >= 10.0 * s.tolerance : a > 0.0;
    if (above_floor && a < 1.0 - 1e-9) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

inline constexpr int kMinDecayEntries = 6;

/// Least-squares fit log(-log|lambda_n|) = log c + beta log n.
inline DecayFit decay_fit(const Spectrum& s) {
  const auto idx = usable_decay_indices(s);
  if (static_cast<int>(idx.size()) < kMinDecayEntries) {
    std::ostringstream os;
    os << "decay_fit: only " << idx.size() << " usable eigenvalues (need " << kMinDecayEntries
       << "); spectrum is effectively finite";
    throw NumericalFailure(os.str());
  }
  std::vector<double> xs, ys;
  for (int n : idx) {
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(-std::log(std::abs(s.eigenvalues[static_cast<std::size_t>(n - 1)]))));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.beta = sxy / sxx;
  fit.c = std::exp(my - fit.beta * mx);
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.first_index = idx.front();
  fit.last_index = idx.back();
  fit.used = static_cast<int>(idx.size());
  return fit;
}

/// 1 + 1/beta, or 1 when fewer than six usable eigenvalues remain.
inline double order_estimate(const Spectrum& s) {
  if (static_cast<int>(usable_decay_indices(s).size()) < kMinDecayEntries) return 1.0;
  return 1.0 + 1.0 / decay_fit(s).beta;
}

}  // namespace ruelle
