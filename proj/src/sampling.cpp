#include "lempertlab/sampling.hpp"

#include <cmath>

namespace lempertlab {

cplx random_in_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> U(0, 1);
  double r = radius * std::sqrt(U(rng));
  return std::polar(r, 2 * M_PI * U(rng));
}

cplx random_unimodular(Rng& rng) {
  std::uniform_real_distribution<double> U(0, 2 * M_PI);
  return std::polar(1.0, U(rng));
}

Point random_polydisc(int n, Rng& rng, double radius) {
  Point z(n);
  for (int j = 0; j < n; ++j) z[j] = random_in_disc(rng, radius);
  return z;
}

Point random_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> N(0, 1);
  Point z(n);
  for (int j = 0; j < n; ++j) z[j] = {N(rng), N(rng)};
  return z;
}

namespace {

// uniform by rejection from the polydisc while that is cheap (acceptance about 1e-3 at n = 4);
// above that, a gauge-radial sample: Gaussian direction, radius with density r^{2n-1}
constexpr int kRejectionMaxDim = 4;

Point radial_lie_ball(int n, Rng& rng) {
  std::uniform_real_distribution<double> U(0, 1);
  Point g = random_gaussian(n, rng);
  double r = std::pow(U(rng), 1.0 / (2 * n));
  return g * (r / gauge_p(g));
}

}  // namespace

Point random_lhat(int n, Rng& rng) {
  if (n > kRejectionMaxDim) {
    for (;;) {
      Point z = lambda_map(radial_lie_ball(n, rng));
      if (in_lhat(z)) return z;
    }
  }
  for (;;) {
    Point z = random_polydisc(n, rng);
    if (in_lhat(z)) return z;
  }
}

Point random_lie_ball(int n, Rng& rng) {
  if (n > kRejectionMaxDim) {
    for (;;) {
      Point z = radial_lie_ball(n, rng);
      if (in_lie_ball(z)) return z;
    }
  }
  for (;;) {
    Point z = random_polydisc(n, rng);
    if (in_lie_ball(z)) return z;
  }
}

Point random_tetra(Rng& rng) {
  for (;;) {
    Point x = random_polydisc(3, rng);
    if (in_tetrablock(x)) return x;
  }
}

Point random_point(DomainKind k, int n, Rng& rng) {
  switch (k) {
    case DomainKind::LieBall: return random_lie_ball(n, rng);
    case DomainKind::LHat: return random_lhat(n, rng);
    case DomainKind::Tetrablock: return random_tetra(rng);
    case DomainKind::UnitDisc: return random_polydisc(1, rng);
  }
  return {};
}

Eigen::MatrixXd random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> N(0, 1);
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = N(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

GroupElement random_group_element(int n, Rng& rng, double max_rapidity) {
  std::uniform_real_distribution<double> U(-max_rapidity, max_rapidity);
  std::uniform_int_distribution<int> J(0, n - 1), K(n, n + 1);
  std::uniform_real_distribution<double> T(0, 2 * M_PI);
  GroupElement g = rotation_element(random_rotation(n, rng)) * phase_element(n, T(rng));
  for (int s = 0; s < 3; ++s) {
    g = g * boost(n, J(rng), K(rng), U(rng));
    g = g * rotation_element(random_rotation(n, rng));
  }
  return g;
}

TetraMobius random_tetra_mobius(Rng& rng, double max_modulus) {
  TetraMobius m;
  m.beta1 = random_in_disc(rng, max_modulus);
  m.beta2 = random_in_disc(rng, max_modulus);
  m.eta1 = random_unimodular(rng);
  m.eta2 = random_unimodular(rng);
  m.flip = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  return m;
}

}  // namespace lempertlab
