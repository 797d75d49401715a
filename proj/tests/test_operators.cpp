#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ruelle/operators.hpp"

using namespace ruelle;

namespace {

const Annulus kSquareAnnulus(0.8, 1.25);

BlaschkeParams bstar_params() { return {1.0, {0.0, 0.5}, false}; }

}  // namespace

TEST(Assemble, SquareColumns) {
  const int N = 12;
  const auto T = assemble_dual(trig_lift(2), kSquareAnnulus, N, N, 256);
  ASSERT_EQ(T.size(), 2 * N);
  EXPECT_EQ(T.omega, 1);
  for (int n = 0; n < N; ++n) {
    for (int row = 0; row < T.size(); ++row) {
      const Complex expected = 2 * n < N && row == 2 * n ? std::pow(0.8, n) : 0.0;
      EXPECT_LT(std::abs(T.matrix(row, n) - expected), 1e-14) << "plus column " << n << " row " << row;
    }
  }
  for (int n = 1; n <= N; ++n) {
    const int col = N + n - 1;
    for (int row = 0; row < T.size(); ++row) {
      const bool hit = 2 * n <= N && row == N + 2 * n - 1;
      const Complex expected = hit ? std::pow(1.25, -n) : 0.0;
      EXPECT_LT(std::abs(T.matrix(row, col) - expected), 1e-14) << "minus column " << n << " row " << row;
    }
  }
}

TEST(Assemble, ConstantsMapToConstants) {
  const std::vector<CircleMap> maps = {reference_blaschke(), trig_lift(3, {0.2}, {0.1}), mobius(Complex{0.5, 0.26})};
  const std::vector<Annulus> annuli = {Annulus(0.7, 1.4), Annulus(0.85, 1.15), Annulus(0.7, 1.4)};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto T = assemble_dual(maps[i], annuli[i], 16, 16);
    EXPECT_LT(std::abs(T.matrix(0, 0) - 1.0), 1e-14) << maps[i].describe();
    for (int row = 1; row < T.size(); ++row) EXPECT_LT(std::abs(T.matrix(row, 0)), 1e-14);
  }
}

TEST(Assemble, ApplyMatchesMatrixColumns) {
  const auto T = assemble_dual(reference_blaschke(), Annulus(0.7, 1.4), 8, 8);
  const auto out = apply(T, HardyPair::minus_basis(3));
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(out.plus[i], T.matrix(i, 10));
    EXPECT_EQ(out.minus[i], T.matrix(8 + i, 10));
  }
}

TEST(Assemble, RejectsBadInput) {
  const auto sq = trig_lift(2);
  EXPECT_THROW(assemble_dual(sq, kSquareAnnulus, 0, 4, 64), InvalidInput);
  EXPECT_THROW(assemble_dual(sq, kSquareAnnulus, 16, 16, 64), InvalidInput);
  EXPECT_THROW(assemble_dual(sq, Annulus(1.1, 2.0), 8, 8, 128), InvalidInput);
  // B* has a pole at 2.
  EXPECT_THROW(assemble_dual(reference_blaschke(), Annulus(0.5, 2.5), 8, 8, 128), DomainError);
}

TEST(Assemble, UnresolvedSamplingIsReported) {
  // Nearly-critical annulus: tau^n on T_R needs far more samples than 64.
  try {
    assemble_dual(reference_blaschke(), Annulus(0.6, 1.9), 8, 8, 64);
    FAIL() << "expected ResolutionError";
  } catch (const ResolutionError& e) {
    EXPECT_GT(e.suggested_samples(), 64);
  }
}

TEST(SingularValues, Basic) {
  const auto z = singular_values(Eigen::MatrixXcd::Zero(5, 5));
  ASSERT_EQ(z.size(), 5u);
  for (double s : z) EXPECT_EQ(s, 0.0);
  const auto J = hardy_embedding(1.25, 0.8, 20);
  const auto s = singular_values(J);
  for (int n = 1; n <= 20; ++n) EXPECT_NEAR(s[n - 1], std::pow(0.8 / 1.25, n - 1), 1e-15);
  EXPECT_THROW(hardy_embedding(1.0, 1.5, 4), InvalidInput);
}

TEST(SingularValues, ExponentialClass) {
  const std::vector<std::pair<CircleMap, Annulus>> cases = {
      {reference_blaschke(), Annulus(0.7, 1.4)},
      {anti_blaschke(1.0, {0.0, 0.5}), Annulus(0.8, 1.25)},
      {trig_lift(2, {0.2}), Annulus(0.85, 1.15)},
      {mobius(Complex{0.5, 0.26}), Annulus(0.7, 1.4)}};
  for (const auto& [map, annulus] : cases) {
    const auto T = assemble_dual(map, annulus, 32, 32);
    const auto s = singular_values(T);
    // Least-squares slope of log s_n over the range above roundoff.
    std::vector<double> xs, ys;
    for (std::size_t n = 0; n < s.size() && s[n] > 1e-12 * s[0]; ++n) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(s[n]));
    }
    ASSERT_GE(xs.size(), 8u) << map.describe();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
    const double q = std::exp(sxy / sxx);
    EXPECT_LT(q, 1.0) << map.describe();
    // Tightest rate with s_n <= s_1 q^{n-1} for every resolved n.
    double tight = 0.0;
    for (std::size_t n = 1; n < xs.size(); ++n) tight = std::max(tight, std::pow(s[n] / s[0], 1.0 / n));
    EXPECT_LT(tight, 1.0) << map.describe();
  }
}

TEST(Transfer, SquareBranches) {
  const BlaschkeParams sq{1.0, {0.0, 0.0}, false};
  for (Complex z : {Complex{0.3, 0.4}, Complex{1.1, -0.2}, Complex{-0.9, 0.05}}) {
    EXPECT_LT(std::abs(transfer_apply_rational(sq, LaurentSeries::monomial(1), z) - 1.0), 1e-12);
    EXPECT_LT(std::abs(transfer_apply_rational(sq, LaurentSeries::monomial(-1), z) - 1.0 / z), 1e-12);
    EXPECT_LT(std::abs(transfer_apply_rational(sq, LaurentSeries::monomial(0), z)), 1e-12);
    // z^3 -> z^{(3+1)/2 - 1} = z.
    EXPECT_LT(std::abs(transfer_apply_rational(sq, LaurentSeries::monomial(3), z) - z), 1e-12);
  }
}

TEST(Transfer, PreservesIntegralOnCircle) {
  // L is the dual of composition: the circle integral of L f equals that of f, with f = 1/z.
  const BlaschkeParams p = bstar_params();
  const Complex v = circle_integral(
      [&](Complex z) { return transfer_apply_rational(p, LaurentSeries::monomial(-1), z); }, 1.0, 256);
  EXPECT_LT(std::abs(v - 1.0), 1e-12);
}

TEST(Transfer, CriticalValueIsDegenerate) {
  // B*' vanishes at 2 - sqrt 3 (inside the disk); its image is a critical value.
  const BlaschkeParams p = bstar_params();
  const Complex c = 2.0 - std::sqrt(3.0);
  const Complex v = c * (2.0 * c - 1.0) / (2.0 - c);
  EXPECT_THROW(transfer_apply_rational(p, LaurentSeries::monomial(1), v), NumericalFailure);
}

TEST(Pairing, Examples) {
  const Annulus a(0.8, 1.25);
  EXPECT_LT(std::abs(pairing(HardyPair::minus_basis(1), LaurentSeries::monomial(0), a) - 1.25), 1e-14);
  EXPECT_LT(std::abs(pairing(HardyPair::plus_basis(0), LaurentSeries::monomial(1), a)), 1e-15);
  EXPECT_LT(std::abs(pairing(HardyPair::minus_basis(1), LaurentSeries::monomial(1), a)), 1e-15);
  // e_m^{(r)} against z^{-m-1} picks r^{-m}.
  EXPECT_LT(std::abs(pairing(HardyPair::plus_basis(3), LaurentSeries::monomial(-4), a) - std::pow(0.8, -3)), 1e-12);
}

TEST(Duality, Examples) {
  EXPECT_LT(duality_residual(bstar_params(), Annulus(0.7, 1.4), 32), 1e-8);
  EXPECT_LT(duality_residual(BlaschkeParams{1.0, {0.0, 0.0}, false}, kSquareAnnulus, 16), 1e-10);
  EXPECT_GT(duality_residual(bstar_params(), Annulus(0.7, 1.4), 2), 1e-3);
}

TEST(Duality, OrientationReversing) {
  const BlaschkeParams anti{1.0, {0.0, 0.5}, true};
  EXPECT_LT(duality_residual(anti, Annulus(0.8, 1.25), 32), 1e-8);
  const BlaschkeParams cubic{Complex{0.6, 0.8}, {0.0, Complex{0.2, 0.3}, -0.3}, false};
  EXPECT_LT(duality_residual(cubic, Annulus(0.75, 1.3), 32), 1e-8);
}
