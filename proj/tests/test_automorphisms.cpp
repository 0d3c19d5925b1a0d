#include <gtest/gtest.h>

#include <cmath>

#include "lempertlab/automorphisms.hpp"
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

cplx disc_mobius(cplx b, cplx t) { return (t - b) / (1.0 - std::conj(b) * t); }

// a random 2x2 contraction and its tetrablock point (a11, a22, det)
Eigen::Matrix2cd random_contraction(Rng& rng) {
  Eigen::Matrix2cd A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) A(i, j) = random_in_disc(rng);
  double s = Eigen::JacobiSVD<Eigen::Matrix2cd>(A).singularValues()(0);
  double r = std::uniform_real_distribution<>(0.05, 0.97)(rng);
  return A * (r / s);
}

Point tetra_of(const Eigen::Matrix2cd& A) { return pt({A(0, 0), A(1, 1), A.determinant()}); }

TEST(WVector, Examples) {
  Eigen::Vector2cd w = w_vector(Point::Zero(3));
  EXPECT_NEAR(std::abs(w[0] - 0.5), 0, 1e-15);
  EXPECT_NEAR(std::abs(w[1] + 0.5 * I), 0, 1e-15);
  w = w_vector(pt({1, I}));
  EXPECT_NEAR(std::abs(w[0] - 0.5), 0, 1e-15);
  EXPECT_NEAR(std::abs(w[1] + 0.5 * I), 0, 1e-15);
  w = w_vector(pt({0.3, 0.4, 0}));
  EXPECT_NEAR(std::abs(w[0] - 0.625), 0, 1e-15);
  EXPECT_NEAR(std::abs(w[1] + 0.375 * I), 0, 1e-15);
}

TEST(ApplyMobius, IdentityRotationAndLinear) {
  Rng rng(20);
  for (int t = 0; t < 200; ++t) {
    Point z = random_lie_ball(4, rng);
    EXPECT_TRUE(approx_equal(apply_mobius(GroupElement::identity(4), z), z, 1e-14));
    double th = std::uniform_real_distribution<>(-M_PI, M_PI)(rng);
    EXPECT_TRUE(approx_equal(apply_mobius(phase_element(4, th), z), std::polar(1.0, -th) * z, 1e-13));
    Eigen::MatrixXd Q = random_rotation(4, rng);
    EXPECT_TRUE(approx_equal(apply_mobius(rotation_element(Q), z), Q.cast<cplx>() * z, 1e-13));
  }
}

TEST(ApplyMobius, RotationBlockInD) {
  // diag(Id, R_theta) written out by hand
  double th = 0.7;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(5, 5);
  M(3, 3) = std::cos(th);
  M(3, 4) = -std::sin(th);
  M(4, 3) = std::sin(th);
  M(4, 4) = std::cos(th);
  GroupElement g(M);
  ASSERT_TRUE(g.valid());
  Point z = pt({0.2, 0.1 * I, -0.3});
  EXPECT_TRUE(approx_equal(apply_mobius(g, z), std::polar(1.0, -th) * z, 1e-14));
}

TEST(ApplyMobius, BidiscCoordinatesAreFactorwise) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    cplx b1 = random_in_disc(rng, 0.9), b2 = random_in_disc(rng, 0.9);
    Point z = random_lie_ball(2, rng);
    Point o = apply_mobius(bidisc_mobius(b1, b2), z);
    cplx s1 = z[0] + I * z[1], s2 = z[0] - I * z[1];
    EXPECT_NEAR(std::abs(o[0] + I * o[1] - disc_mobius(b1, s1)), 0, 1e-12);
    EXPECT_NEAR(std::abs(o[0] - I * o[1] - disc_mobius(b2, s2)), 0, 1e-12);
  }
}

TEST(ApplyMobius, CompositionLaw) {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    GroupElement g = random_group_element(3, rng), h = random_group_element(3, rng);
    GroupElement gh = g * h;
    EXPECT_LT(gh.j_defect(), 1e-9);
    for (int s = 0; s < 100; ++s) {
      Point z = random_lie_ball(3, rng);
      Point a = apply_mobius(gh, z), b = apply_mobius(g, apply_mobius(h, z));
      EXPECT_TRUE(approx_equal(a, b, 1e-9));
    }
  }
}

TEST(ApplyMobius, InverseUndoes) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    GroupElement g = random_group_element(4, rng);
    Point z = random_lie_ball(4, rng);
    EXPECT_TRUE(approx_equal(apply_mobius(g.inverse(), apply_mobius(g, z)), z, 1e-9));
    EXPECT_TRUE((g * g.inverse()).M.isIdentity(1e-9));
  }
}

TEST(ApplyMobius, MembershipTransport) {
  Rng rng(24);
  GroupElement g = random_group_element(3, rng);
  for (int t = 0; t < 10000; ++t) {
    if (t % 100 == 0) g = random_group_element(3, rng);
    Point z = random_lie_ball(3, rng);
    EXPECT_TRUE(in_lie_ball(apply_mobius(g, z)));
  }
  for (int t = 0; t < 500; ++t) {
    Point z = random_gaussian(3, rng);
    z /= gauge_p(z);
    EXPECT_NEAR(gauge_p(apply_mobius(random_group_element(3, rng), z)), 1, 1e-8);
  }
}

TEST(ApplyMobius, DimensionMismatch) {
  EXPECT_THROW(apply_mobius(GroupElement::identity(3), Point::Zero(2)), DimensionError);
}

TEST(KappaLift, HomomorphismAndSlice) {
  Rng rng(25);
  EXPECT_LT((kappa_lift(GroupElement::identity(3)).M - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-15);
  for (int t = 0; t < 100; ++t) {
    GroupElement g = random_group_element(3, rng), h = random_group_element(3, rng);
    EXPECT_LT((kappa_lift(g * h).M - (kappa_lift(g) * kappa_lift(h)).M).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_TRUE((kappa_lift(g) * kappa_lift(g.inverse())).M.isIdentity(1e-9));
    for (int s = 0; s < 10; ++s) {
      Point z = random_lie_ball(3, rng);
      Point lifted(4);
      lifted << 0, z;
      Point o = apply_mobius(kappa_lift(g), lifted);
      EXPECT_LT(std::abs(o[0]), 1e-12);
      EXPECT_TRUE(approx_equal(o.tail(3), apply_mobius(g, z), 1e-10));
    }
  }
}

TEST(KappaLift, RejectsInvalid) {
  GroupElement bad(Eigen::MatrixXd::Constant(4, 4, 0.5));
  EXPECT_THROW(kappa_lift(bad), InvalidElement);
}

TEST(Descend, IdentityAndBranchIndependence) {
  Rng rng(26);
  LhatAutomorphism id = descend(GroupElement::identity(3));
  for (int t = 0; t < 1000; ++t) {
    Point w = random_lhat(4, rng);
    EXPECT_TRUE(approx_equal(id.apply(w), w, 1e-13));
    LhatAutomorphism phi = descend(random_group_element(3, rng));
    EXPECT_TRUE(approx_equal(phi.apply(w, 1), phi.apply(w, -1), 1e-10));
    EXPECT_TRUE(in_lhat(phi.apply(w)));
  }
}

TEST(Descend, ConjugatesLambda) {
  Rng rng(27);
  for (int t = 0; t < 300; ++t) {
    GroupElement g = random_group_element(3, rng);
    Point z = random_lie_ball(4, rng);
    Point lhs = lambda_map(apply_mobius(kappa_lift(g), z));
    Point rhs = descend(g).apply(lambda_map(z));
    EXPECT_TRUE(approx_equal(lhs, rhs, 1e-10));
  }
}

TEST(Descend, ExceptionalSetInvariant) {
  Rng rng(28);
  std::vector<LhatAutomorphism> maps;
  for (int k = 0; k < 10; ++k) maps.push_back(descend(random_group_element(3, rng)));
  for (int t = 0; t < 1000; ++t) {
    Point w(4);
    w << 0, random_lie_ball(3, rng);
    for (const auto& phi : maps) EXPECT_LT(std::abs(phi.apply(w)[0]), 1e-9);
  }
}

TEST(Descend, InverseAndProduct) {
  Rng rng(29);
  for (int t = 0; t < 200; ++t) {
    LhatAutomorphism a = descend(random_group_element(3, rng)), b = descend(random_group_element(3, rng));
    Point w = random_lhat(4, rng);
    EXPECT_TRUE(approx_equal(a.inverse().apply(a.apply(w)), w, 1e-9));
    EXPECT_TRUE(approx_equal((a * b).apply(w), a.apply(b.apply(w)), 1e-9));
  }
}

TEST(ExtendLhat, AppendsAFixedZero) {
  Rng rng(30);
  LhatAutomorphism id = extend_lhat(descend(GroupElement::identity(2)));
  for (int t = 0; t < 1000; ++t) {
    LhatAutomorphism phi = descend(random_group_element(2, rng));
    LhatAutomorphism big = extend_lhat(phi);
    EXPECT_EQ(big.n(), 4);
    Point z = random_lhat(3, rng);
    Point e = embed_q(z);
    Point o = big.apply(e);
    EXPECT_LT(std::abs(o[3]), 1e-12);
    EXPECT_TRUE(approx_equal(o.head(3), phi.apply(z), 1e-10));
    EXPECT_TRUE(in_lhat(o));
    EXPECT_TRUE(approx_equal(id.apply(e), e, 1e-13));
  }
}

TEST(LieBallToOrigin, SendsThePointToZero) {
  EXPECT_LT((lie_ball_to_origin(Point::Zero(3)).M - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-14);
  GroupElement g = lie_ball_to_origin(pt({0.6, 0, 0}));
  EXPECT_LT(apply_mobius(g, pt({0.6, 0, 0})).norm(), 1e-12);
  EXPECT_NEAR(gauge_p(apply_mobius(g, Point::Zero(3))), 0.6, 1e-12);
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    Point z = random_lie_ball(2 + t % 4, rng);
    GroupElement h = lie_ball_to_origin(z);
    EXPECT_TRUE(h.valid());
    EXPECT_LT(apply_mobius(h, z).norm(), 1e-9);
  }
  EXPECT_THROW(lie_ball_to_origin(pt({0.5, 0.5 * I})), DomainError);
}

TEST(TetraFromLhat3, Examples) {
  double r = 0.7;
  EXPECT_TRUE(approx_equal(tetra_from_lhat3(pt({r, 0, 0})), pt({0, 0, r}), 1e-15));
  EXPECT_TRUE(approx_equal(tetra_from_lhat3(pt({0, r / 2, -I * (r / 2)})), pt({r, 0, 0}), 1e-15));
  EXPECT_TRUE(approx_equal(tetra_from_lhat3(Point::Zero(3)), Point::Zero(3)));
}

TEST(TetraFromLhat3, MembershipExactBijection) {
  Rng rng(32);
  for (int t = 0; t < 10000; ++t) {
    Point z = random_polydisc(3, rng);
    EXPECT_EQ(in_lhat(z), in_tetrablock(tetra_from_lhat3(z)));
    EXPECT_TRUE(approx_equal(lhat3_from_tetra(tetra_from_lhat3(z)), z, 1e-12));
    Point x = random_polydisc(3, rng);
    EXPECT_EQ(in_tetrablock(x), in_lhat(lhat3_from_tetra(x)));
    EXPECT_TRUE(approx_equal(tetra_from_lhat3(lhat3_from_tetra(x)), x, 1e-12));
  }
}

TEST(TetraMobius, Examples) {
  cplx b1(0.3, -0.2), b2(-0.1, 0.5);
  TetraMobius m;
  m.beta1 = b1;
  m.beta2 = b2;
  EXPECT_LT(tetra_mobius_apply(m, pt({b1, b2, b1 * b2})).norm(), 1e-14);
  Point x = pt({0.2, 0.1 * I, 0.3});
  EXPECT_TRUE(approx_equal(tetra_mobius_apply(TetraMobius{}, x), x, 1e-15));
}

TEST(TetraMobius, MatchesTheMatrixBallMap) {
  // M -> (M - B)(Id - B^* M)^{-1}, B = diag(beta), computed on 2x2 matrices
  Rng rng(33);
  for (int t = 0; t < 1000; ++t) {
    Eigen::Matrix2cd A = random_contraction(rng);
    TetraMobius m;
    m.beta1 = random_in_disc(rng, 0.9);
    m.beta2 = random_in_disc(rng, 0.9);
    Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
    B(0, 0) = m.beta1;
    B(1, 1) = m.beta2;
    Eigen::Matrix2cd Mp = (A - B) * (Eigen::Matrix2cd::Identity() - B.adjoint() * A).inverse();
    EXPECT_TRUE(approx_equal(tetra_mobius_apply(m, tetra_of(A)), tetra_of(Mp), 1e-10));
  }
}

TEST(TetraMobius, PreservesTheTetrablockAndInverts) {
  Rng rng(34);
  for (int t = 0; t < 1000; ++t) {
    TetraMobius m = random_tetra_mobius(rng);
    Point x = random_tetra(rng);
    Point y = tetra_mobius_apply(m, x);
    EXPECT_TRUE(in_tetrablock(y));
    EXPECT_TRUE(approx_equal(tetra_mobius_apply(m.inverse(), y), x, 1e-9));
  }
}

TEST(TetraMobius, ScalingPreservesMembership) {
  Rng rng(35);
  for (int t = 0; t < 1000; ++t) {
    TetraMobius m;
    m.eta1 = random_unimodular(rng);
    m.eta2 = random_unimodular(rng);
    Point x = random_polydisc(3, rng);
    EXPECT_EQ(in_tetrablock(tetra_mobius_apply(m, x)), in_tetrablock(x));
  }
}

TEST(TetraMobius, AgreesWithItsLhatElement) {
  Rng rng(36);
  for (int t = 0; t < 300; ++t) {
    TetraMobius m = random_tetra_mobius(rng);
    LhatAutomorphism phi = descend(m.lhat3_element());
    Point z = random_lhat(3, rng);
    Point a = tetra_from_lhat3(phi.apply(z));
    Point b = tetra_mobius_apply(m, tetra_from_lhat3(z));
    EXPECT_TRUE(approx_equal(a, b, 1e-9));
  }
}

TEST(TetraNormalizer, ReachesTheAxis) {
  Rng rng(37);
  for (int t = 0; t < 500; ++t) {
    Point x = random_tetra(rng);
    double res = 1;
    TetraMobius m = tetra_normalizer(x, &res);
    Point y = tetra_mobius_apply(m, x);
    EXPECT_LT(std::abs(y[0]) + std::abs(y[1]), 1e-9);
    EXPECT_GE(y[2].real(), -1e-12);
    EXPECT_LT(std::abs(y[2].imag()), 1e-9);
    EXPECT_LE(res, 1e-10);
  }
}

TEST(NormalizePointLhat, Examples) {
  NormalizedPoint np = normalize_point_lhat(pt({0.4, 0, 0, 0}));
  EXPECT_NEAR(np.rho, 0.4, 1e-12);
  EXPECT_TRUE(approx_equal(np.map.apply(pt({0.4, 0, 0, 0})), pt({0.4, 0, 0, 0}), 1e-10));

  Point z = pt({0, 0.3, 0.2 * I, -0.1});
  np = normalize_point_lhat(z);
  EXPECT_NEAR(np.rho, 0, 1e-8);
  EXPECT_LT(np.map.apply(z).norm(), 1e-8);
}

TEST(NormalizePointLhat, RandomPointsAndInvariance) {
  Rng rng(38);
  for (int t = 0; t < 300; ++t) {
    Point z = random_lhat(4, rng);
    NormalizedPoint np = normalize_point_lhat(z);
    Point o = np.map.apply(z);
    EXPECT_NEAR(std::abs(o[0] - np.rho), 0, 1e-8);
    EXPECT_LT(o.tail(3).norm(), 1e-8);
    for (int s = 0; s < 5; ++s) {
      Point v = random_polydisc(4, rng);
      EXPECT_EQ(in_lhat(np.map.apply(v)), in_lhat(v));
    }
  }
}

TEST(NormalizePair, Examples) {
  Rng rng(39);
  Point z = random_lhat(4, rng);
  NormalizedPair p = normalize_pair(z, z);
  EXPECT_TRUE(approx_equal(p.z, p.w, 1e-9));
  EXPECT_LT(p.z.tail(3).norm(), 1e-8);

  Point w = random_lhat(4, rng);
  p = normalize_pair(Point::Zero(4), w);
  EXPECT_LT(p.z.norm(), 1e-12);
  EXPECT_NEAR(std::abs(p.w[0]), std::abs(w[0]), 1e-10);
  Moduli m = moduli(w.tail(3));
  EXPECT_NEAR(std::abs(p.w[1]), m.a, 1e-10);
  EXPECT_NEAR(std::abs(p.w[2]), m.b, 1e-10);
  EXPECT_LT(std::abs(p.w[3]), 1e-10);
}

TEST(NormalizePair, RandomPairsInLhat5) {
  Rng rng(40);
  for (int t = 0; t < 200; ++t) {
    Point z = random_lhat(5, rng), w = random_lhat(5, rng);
    NormalizedPair p = normalize_pair(z, w);
    EXPECT_LT(p.z.tail(4).norm(), 1e-8);
    EXPECT_LT(p.w.tail(2).norm(), 1e-8);
    EXPECT_TRUE(approx_equal(p.map.apply(z), p.z, 1e-8));
    EXPECT_TRUE(approx_equal(p.map.apply(w), p.w, 1e-8));
    EXPECT_TRUE(in_lhat(p.w));
  }
}

}  // namespace
}  // namespace lempertlab
