#include <gtest/gtest.h>

#include <cmath>

#include "lempertlab/automorphisms.hpp"
#include "lempertlab/metrics.hpp"
#include "lempertlab/sampling.hpp"

namespace lempertlab {
namespace {

const cplx I(0, 1);

Point pt(std::initializer_list<cplx> v) {
  Point z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (cplx c : v) z[k++] = c;
  return z;
}

// tetrablock closed form written out again, with the swap done by hand
double tetra_oracle(const Point& x) {
  cplx z1 = x[0], z2 = x[1], z3 = x[2];
  if (std::abs(z1) > std::abs(z2)) std::swap(z1, z2);
  return std::atanh((std::abs(z2 - std::conj(z1) * z3) + std::abs(z1 * z2 - z3)) / (1 - std::norm(z1)));
}

// c(0, z) on LHat(n) through the tail rotation into LHat(3) and then the tetrablock
double lhat_via_tetra(const Point& z) {
  int n = static_cast<int>(z.size());
  Point y = z;
  if (n > 3) y = apply_frame(partial_normal_frame(z, 1).frame, z);
  return tetra_oracle(tetra_from_lhat3(y.head(3)));
}

TEST(Poincare, Examples) {
  EXPECT_NEAR(poincare(0, 0.5), std::atanh(0.5), 1e-15);
  EXPECT_NEAR(poincare(0.5493, 0.5493), 0, 1e-15);
  EXPECT_NEAR(poincare(0.3, -0.3), std::atanh(0.6 / 1.09), 1e-15);
  EXPECT_THROW(poincare(1.0, 0), DomainError);
}

TEST(Poincare, SymmetricAndMobiusInvariant) {
  Rng rng(50);
  for (int t = 0; t < 1000; ++t) {
    cplx a = random_in_disc(rng), b = random_in_disc(rng), c = random_in_disc(rng, 0.9);
    EXPECT_NEAR(poincare(a, b), poincare(b, a), 1e-12);
    auto m = [&](cplx s) { return (s - c) / (1.0 - std::conj(c) * s); };
    EXPECT_NEAR(poincare(m(a), m(b)), poincare(a, b), 1e-8 * (1 + poincare(a, b)));
  }
}

TEST(CarathTetra, Examples) {
  EXPECT_NEAR(carath_origin_tetra(pt({0, 0, 0.5})), std::atanh(0.5), 1e-15);
  EXPECT_NEAR(carath_origin_tetra(pt({0, 0.3 + 0.4 * I, 0})), std::atanh(0.5), 1e-15);
  EXPECT_EQ(carath_origin_tetra(Point::Zero(3)), 0);
  EXPECT_THROW(carath_origin_tetra(pt({0.8, 0.8, 0})), DomainError);
}

TEST(CarathTetra, MatchesOracleAndSwap) {
  Rng rng(51);
  for (int t = 0; t < 2000; ++t) {
    Point x = random_tetra(rng);
    EXPECT_NEAR(carath_origin_tetra(x), tetra_oracle(x), 1e-12);
    Point s = pt({x[1], x[0], x[2]});
    EXPECT_NEAR(carath_origin_tetra(s), carath_origin_tetra(x), 1e-12);
  }
}

TEST(CarathLhat, Examples) {
  EXPECT_NEAR(carath_origin_lhat(pt({0.3 - 0.4 * I, 0, 0, 0})), std::atanh(0.5), 1e-14);
  Point zp = pt({0.2, 0.3 * I, -0.1});
  Point z(4);
  z << 0, zp;
  EXPECT_NEAR(carath_origin_lhat(z), std::atanh(gauge_p(zp)), 1e-12);
  EXPECT_EQ(carath_origin_lhat(Point::Zero(5)), 0);
  EXPECT_THROW(carath_origin_lhat(pt({0.9, 0.5, 0})), DomainError);
}

TEST(CarathLhat, FormsAgree) {
  Rng rng(52);
  for (int n = 3; n <= 6; ++n) {
    for (int t = 0; t < 2500; ++t) {
      LhatOriginForms f = carath_origin_lhat_forms(random_lhat(n, rng));
      EXPECT_NEAR(f.printed, f.eta_form, 1e-10);
    }
  }
}

TEST(CarathLhat, MatchesTetrablockThroughTheBiholomorphism) {
  Rng rng(53);
  for (int n = 3; n <= 5; ++n) {
    for (int t = 0; t < 2000; ++t) {
      Point z = random_lhat(n, rng);
      double c = carath_origin_lhat(z), o = lhat_via_tetra(z);
      EXPECT_NEAR(std::tanh(c), std::tanh(o), 1e-12);
    }
  }
}

TEST(CarathLhat, RotationInvariantAndMonotoneUnderProjection) {
  Rng rng(54);
  for (int t = 0; t < 2000; ++t) {
    Point z = random_lhat(4, rng);
    Point r = apply_frame(partial_normal_frame(z, 1).frame, z);
    EXPECT_NEAR(carath_origin_lhat(r), carath_origin_lhat(z), 1e-10);
    EXPECT_LE(carath_origin_lhat(project_pi(z)), carath_origin_lhat(z) + 1e-10);
  }
}

TEST(CarathLhat3, Examples) {
  double r = 0.6;
  EXPECT_NEAR(carath_origin_lhat3(pt({r, 0, 0})), std::atanh(r), 1e-15);
  EXPECT_NEAR(carath_origin_lhat3(pt({0, r / 2, -I * (r / 2)})), std::atanh(r), 1e-15);
  EXPECT_EQ(carath_origin_lhat3(Point::Zero(3)), 0);
}

TEST(CarathLhat3, EqualsTetrablockValue) {
  Rng rng(55);
  for (int t = 0; t < 10000; ++t) {
    Point z = random_lhat(3, rng);
    EXPECT_NEAR(std::tanh(carath_origin_lhat3(z)), std::tanh(carath_origin_tetra(tetra_from_lhat3(z))), 1e-12);
  }
}

TEST(CarathLieBall, Examples) {
  EXPECT_NEAR(carath_origin_lieball(pt({0.7, 0, 0})), std::atanh(0.7), 1e-15);
  EXPECT_EQ(carath_origin_lieball(Point::Zero(3)), 0);
  EXPECT_NEAR(carath_origin_lieball(pt({0.4, 0.4 * I})), std::atanh(0.8), 1e-12);
}

TEST(KobayashiTetra, Examples) {
  EXPECT_NEAR(kobayashi_origin_tetra(pt({1, 0, 0})), 1, 1e-15);
  EXPECT_NEAR(kobayashi_origin_tetra(pt({0.5, 0.2, 0.3})), 0.8, 1e-15);
  EXPECT_NEAR(kobayashi_origin_tetra(pt({0, 0, 1})), 1, 1e-15);
}

TEST(KobayashiLhat, Examples) {
  EXPECT_NEAR(kobayashi_origin_lhat(pt({0.3 + 0.4 * I, 0})), 0.5, 1e-15);
  EXPECT_NEAR(kobayashi_origin_lhat(pt({0, 1, I, 0})), 2, 1e-12);
  EXPECT_NEAR(kobayashi_origin_lhat(pt({1, 0.3, 0.4, 0})), 1.5, 1e-12);
}

TEST(KobayashiLhat, ThreeDimensionalExpression) {
  Rng rng(56);
  for (int t = 0; t < 10000; ++t) {
    Point X = random_gaussian(3, rng);
    double direct = std::abs(X[0]) + std::max(std::abs(X[1] + I * X[2]), std::abs(X[1] - I * X[2]));
    EXPECT_NEAR(kobayashi_origin_lhat(X), direct, 1e-12 * (1 + direct));
    EXPECT_NEAR(kobayashi_origin_lhat3_max(X), direct, 1e-12 * (1 + direct));
  }
}

TEST(Kobayashi, Homogeneous) {
  Rng rng(57);
  for (int t = 0; t < 1000; ++t) {
    double s = std::uniform_real_distribution<>(-3, 3)(rng);
    Point X = random_gaussian(5, rng), Y = random_gaussian(3, rng);
    EXPECT_NEAR(kobayashi_origin_lhat(s * X), std::abs(s) * kobayashi_origin_lhat(X), 1e-12 * (1 + X.norm()));
    EXPECT_NEAR(kobayashi_origin_tetra(s * Y), std::abs(s) * kobayashi_origin_tetra(Y), 1e-12 * (1 + Y.norm()));
  }
}

TEST(AtanhClamped, FiniteNearOne) {
  EXPECT_TRUE(std::isfinite(atanh_clamped(1.0)));
  EXPECT_NEAR(atanh_clamped(0.5), std::atanh(0.5), 1e-15);
}

}  // namespace
}  // namespace lempertlab
