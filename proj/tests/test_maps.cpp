#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ruelle/lifts.hpp"
#include "ruelle/maps.hpp"

using namespace ruelle;

namespace {

CircleMap bstar() { return reference_blaschke(); }
CircleMap anti_bstar() { return anti_blaschke(1.0, {0.0, 0.5}); }
CircleMap square() { return trig_lift(2); }

Complex random_in_annulus(std::mt19937& rng, double r, double R) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r + (R - r) * u(rng);
  return std::polar(rho, 2.0 * kPi * u(rng));
}

void expect_derivative_matches(const CircleMap& map, double r, double R, unsigned seed) {
  std::mt19937 rng(seed);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Complex z = random_in_annulus(rng, r, R);
    const Complex fd = (eval(map, z + h) - eval(map, z - h)) / (2.0 * h);
    const Complex d = deriv(map, z);
    EXPECT_LT(std::abs(fd - d), 1e-6 * std::max(1.0, std::abs(d))) << map.describe() << " at " << z;
  }
}

}  // namespace

TEST(Eval, Examples) {
  EXPECT_LT(std::abs(eval(bstar(), 1.0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(eval(square(), Complex{0.0, 0.5}) + 0.25), 1e-15);
  const CircleMap m0 = mobius(0.0);
  for (Complex z : {Complex{0.3, 0.4}, Complex{1.2, -0.7}, Complex{-2.0, 0.1}}) {
    EXPECT_LT(std::abs(eval(m0, z) - z * z), 1e-14);
  }
  // B* written out by hand.
  const Complex z{0.7, 0.2};
  EXPECT_LT(std::abs(eval(bstar(), z) - z * (2.0 * z - 1.0) / (2.0 - z)), 1e-15);
  EXPECT_LT(std::abs(eval(anti_bstar(), z) - (2.0 - z) / (z * (2.0 * z - 1.0))), 1e-14);
}

TEST(Eval, PolesAreDomainErrors) {
  EXPECT_THROW(eval(bstar(), 2.0), DomainError);
  EXPECT_THROW(eval(anti_bstar(), 0.0), DomainError);
  EXPECT_THROW(eval(anti_bstar(), 0.5), DomainError);
  EXPECT_THROW(eval(mobius(0.5), 4.0), DomainError);
}

TEST(Deriv, Examples) {
  EXPECT_LT(std::abs(deriv(bstar(), 0.0) + 0.5), 1e-15);
  EXPECT_LT(std::abs(deriv(square(), 1.0) - 2.0), 1e-15);
  EXPECT_LT(std::abs(deriv(bstar(), 1.0) - 4.0), 1e-14);
}

TEST(Deriv, MatchesFiniteDifferences) {
  expect_derivative_matches(bstar(), 0.6, 1.6, 1);
  expect_derivative_matches(anti_bstar(), 0.6, 1.6, 2);
  expect_derivative_matches(square(), 0.5, 2.0, 3);
  expect_derivative_matches(trig_lift(-3), 0.5, 2.0, 4);
  expect_derivative_matches(trig_lift(2, {0.3, 0.05}, {0.1}), 0.8, 1.25, 5);
  expect_derivative_matches(mobius(Complex{0.5, 0.26}), 0.6, 1.6, 6);
  expect_derivative_matches(blaschke(Complex{0.6, 0.8}, {0.0, Complex{0.2, -0.3}, -0.4}), 0.75, 1.3, 7);
  expect_derivative_matches(iterate(bstar(), 2), 0.8, 1.2, 8);
  expect_derivative_matches(compose(square(), bstar()), 0.7, 1.4, 9);
}

TEST(Blaschke, ReflectionIdentity) {
  std::mt19937 rng(11);
  const Complex alpha = std::polar(1.0, 0.7);
  const std::vector<Complex> a = {0.0, Complex{0.3, 0.4}, Complex{-0.5, 0.1}};
  std::vector<Complex> abar;
  for (auto x : a) abar.push_back(std::conj(x));
  const CircleMap B = blaschke(alpha, a);
  const CircleMap Bbar = blaschke(std::conj(alpha), abar);
  for (int i = 0; i < 50; ++i) {
    const Complex z = random_in_annulus(rng, 0.7, 1.4);
    EXPECT_LT(std::abs(eval(B, 1.0 / z) - 1.0 / eval(Bbar, z)), 1e-12 * std::max(1.0, std::abs(eval(B, 1.0 / z))));
  }
}

TEST(Blaschke, PreservesCircle) {
  EXPECT_LT(circle_deviation(bstar()), 1e-14);
  EXPECT_LT(circle_deviation(anti_bstar()), 1e-14);
  EXPECT_LT(circle_deviation(trig_lift(3, {0.2}, {0.1})), 1e-14);
  EXPECT_LT(circle_deviation(mobius(0.37)), 1e-12);
}

TEST(Blaschke, RejectsBadParameters) {
  EXPECT_THROW(blaschke(1.0, {0.0, 1.0}), InvalidInput);
  EXPECT_THROW(blaschke(2.0, {0.0, 0.5}), InvalidInput);
  EXPECT_THROW(blaschke(1.0, {}), InvalidInput);
}

// Hardy norm sum |f_n|^2 r^{2n} bounds point evaluation by r / sqrt(r^2 - |z|^2).
TEST(Hardy, PointEvaluationBound) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = 0.5 + u(rng);
    const int deg = static_cast<int>(u(rng) * 21);
    std::vector<Complex> c(deg + 1);
    double norm2 = 0.0;
    for (int n = 0; n <= deg; ++n) {
      c[n] = {g(rng), g(rng)};
      norm2 += std::norm(c[n]) * std::pow(r, 2 * n);
    }
    const Complex z = std::polar(r * u(rng), 2.0 * kPi * u(rng));
    Complex f{};
    for (int n = deg; n >= 0; --n) f = f * z + c[n];
    EXPECT_LE(std::abs(f), r / std::sqrt(r * r - std::norm(z)) * std::sqrt(norm2) * (1.0 + 1e-12));
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(square()), 2);
  EXPECT_EQ(degree(bstar()), 2);
  EXPECT_EQ(degree(anti_bstar()), -2);
  EXPECT_EQ(degree(trig_lift(-3, {0.1})), -3);
  EXPECT_EQ(degree(mobius(Complex{0.5, 0.26})), 2);
  EXPECT_EQ(degree(iterate(bstar(), 2)), 4);
  EXPECT_EQ(degree(compose(anti_bstar(), bstar())), -4);
  EXPECT_EQ(degree(blaschke(1.0, {0.0, 0.2, Complex{0.1, 0.3}})), 3);
}

TEST(Orientation, Examples) {
  EXPECT_EQ(orientation(square()), 1);
  EXPECT_EQ(orientation(anti_bstar()), -1);
  EXPECT_EQ(orientation(trig_lift(-3)), -1);
  EXPECT_THROW(orientation(trig_lift(1)), InvalidInput);
}

TEST(MinExpansion, Examples) {
  EXPECT_NEAR(min_expansion(square()), 2.0, 1e-12);
  // |B*'| on the circle is 1 + 3/|2 - z|^2 >= 4/3; attained at z = -1.
  EXPECT_NEAR(min_expansion(bstar()), 4.0 / 3.0, 1e-9);
  EXPECT_GT(min_expansion(bstar()), 1.0);
  // tau = z^2 exp(0.9 i cos theta): |tau'| = |2 - 0.9 sin theta| on the circle.
  EXPECT_NEAR(min_expansion(trig_lift(2, {0.9})), 1.1, 1e-6);
  EXPECT_THROW(min_expansion(square(), 100), InvalidInput);
}

TEST(Expansivity, Examples) {
  EXPECT_EQ(check_holo_expansive(square(), Annulus(0.8, 1.25)).kind, Expansivity::A1);
  EXPECT_EQ(check_holo_expansive(square(), Annulus(0.5, 3.0)).kind, Expansivity::A1);
  const auto anti = check_holo_expansive(anti_bstar(), Annulus(0.8, 1.25));
  EXPECT_EQ(anti.kind, Expansivity::A2) << anti.reason;
  EXPECT_GT(anti.margin, 0.0);
  // Lift with |tau'| down to 0.5 on the circle: a thin annulus cannot work.
  const auto thin = check_holo_expansive(trig_lift(2, {1.5}), Annulus(0.99, 1.01));
  EXPECT_EQ(thin.kind, Expansivity::none);
  EXPECT_LE(thin.margin, 0.0);
  // Pole 2 of B* inside the annulus.
  const auto pole = check_holo_expansive(bstar(), Annulus(0.5, 2.5));
  EXPECT_EQ(pole.kind, Expansivity::none);
  EXPECT_NE(pole.reason.find("pole"), std::string::npos);
}

TEST(Expansivity, OrientationMatchesCase) {
  const std::vector<CircleMap> maps = {square(), bstar(), anti_bstar(), trig_lift(-2), trig_lift(3, {0.2}),
                                       mobius(Complex{0.4, 0.3})};
  for (const auto& m : maps) {
    const auto found = find_annulus(m);
    const auto v = check_holo_expansive(m, found.annulus);
    ASSERT_NE(v.kind, Expansivity::none) << m.describe();
    EXPECT_EQ(v.kind == Expansivity::A1 ? 1 : -1, orientation(m)) << m.describe();
  }
}

TEST(FixedPoint, Examples) {
  const auto b = fixed_point_disk(bstar());
  EXPECT_LT(std::abs(b.z0), 1e-13);
  EXPECT_LT(std::abs(b.mu + 0.5), 1e-13);
  const auto s = fixed_point_disk(trig_lift(3));
  EXPECT_LT(std::abs(s.z0), 1e-13);
  EXPECT_LT(std::abs(s.mu), 1e-13);
  const auto m = fixed_point_disk(mobius(1.0));
  EXPECT_LT(std::abs(m.mu + 0.5), 1e-13);
  // Zeros off the origin move the fixed point.
  const auto g = blaschke(1.0, {Complex{0.2, -0.1}, 0.4});
  const auto fp = fixed_point_disk(g);
  EXPECT_GT(std::abs(fp.z0), 1e-3);
  EXPECT_LT(std::abs(eval(g, fp.z0) - fp.z0), 1e-13);
  EXPECT_LT(std::abs(fp.mu - deriv(g, fp.z0)), 1e-15);
  EXPECT_LT(std::abs(fp.mu), 1.0);
}

TEST(FixedPoint, IterateMultiplier) {
  const auto fp = fixed_point_disk(iterate(bstar(), 2));
  EXPECT_LT(std::abs(fp.mu - 0.25), 1e-12);
  const CircleMap cube = iterate(square(), 3);
  const Complex z{0.6, 0.5};
  EXPECT_LT(std::abs(eval(cube, z) - std::pow(z, 8)), 1e-14);
  EXPECT_EQ(degree(cube), 8);
}

TEST(SecondIterate, Examples) {
  BlaschkeParams p{1.0, {0.0, 0.5}, true};
  EXPECT_NEAR(second_iterate_multiplier(p), 0.5, 1e-12);
  p.zeros = {0.0, 0.3, -0.4};
  EXPECT_NEAR(second_iterate_multiplier(p), 0.12, 1e-12);
  p.zeros = {0.0, 0.0, 0.0};
  EXPECT_NEAR(second_iterate_multiplier(p), 0.0, 1e-12);
  p.anti = false;
  EXPECT_THROW(second_iterate_multiplier(p), InvalidInput);
}

TEST(Poles, Lists) {
  const auto b = poles(bstar());
  ASSERT_TRUE(b);
  ASSERT_EQ(b->size(), 1u);
  EXPECT_LT(std::abs((*b)[0] - 2.0), 1e-15);
  const auto a = poles(anti_bstar());
  ASSERT_TRUE(a);
  EXPECT_EQ(a->size(), 2u);
  EXPECT_TRUE(poles(square())->empty());
  EXPECT_FALSE(poles(iterate(bstar(), 2)));
}

TEST(Mobius, FamilyPreservesCircleForRealParameter) {
  for (int i = 0; i <= 10; ++i) {
    EXPECT_LT(circle_deviation(mobius(0.1 * i)), 1e-12) << "w=" << 0.1 * i;
  }
  EXPECT_THROW(mobius(1.5, Annulus(0.5, 1.5)), DomainError);
}
