#include "lempertlab/automorphisms.hpp"

#include <cmath>
#include <random>

namespace lempertlab {

namespace {

Eigen::MatrixXd jmat(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n + 2, n + 2);
  J(n, n) = J(n + 1, n + 1) = -1;
  return J;
}

Eigen::Matrix2d rot2(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

}  // namespace

GroupElement GroupElement::identity(int n) { return GroupElement(Eigen::MatrixXd::Identity(n + 2, n + 2)); }

GroupElement GroupElement::operator*(const GroupElement& h) const {
  if (n() != h.n()) throw DimensionError("group product: dimension mismatch");
  return GroupElement(M * h.M);
}

GroupElement GroupElement::inverse() const {
  Eigen::MatrixXd J = jmat(n());
  return GroupElement(J * M.transpose() * J);
}

double GroupElement::j_defect() const {
  Eigen::MatrixXd J = jmat(n());
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

bool GroupElement::valid(double tol) const {
  if (M.rows() != M.cols() || M.rows() < 3) return false;
  return j_defect() <= tol && D().determinant() > 0;
}

Eigen::Vector2cd w_vector(const Point& z) {
  cplx q = symmetric_square(z);
  return {0.5 * (q + 1.0), cplx(0, 0.5) * (q - 1.0)};
}

Point apply_mobius(const GroupElement& g, const Point& z) {
  if (g.n() != z.size()) throw DimensionError("apply_mobius: dimension mismatch");
  const int n = g.n();
  Eigen::Vector2cd W = w_vector(z);
  Eigen::MatrixXcd Mc = g.M.cast<cplx>();
  Point num = Mc.topLeftCorner(n, n) * z + Mc.topRightCorner(n, 2) * W;
  Eigen::Vector2cd low = Mc.bottomLeftCorner(2, n) * z + Mc.bottomRightCorner(2, 2) * W;
  cplx den = low[0] + cplx(0, 1) * low[1];
  if (std::abs(den) < 1e-13) throw SingularityError("apply_mobius: vanishing denominator");
  return num / den;
}

GroupElement kappa_lift(const GroupElement& g) {
  if (!g.valid()) throw InvalidElement("kappa_lift: element not in G(n)");
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(g.M.rows() + 1, g.M.cols() + 1);
  h.bottomRightCorner(g.M.rows(), g.M.cols()) = g.M;
  return GroupElement(h);
}

GroupElement kappa_append(const GroupElement& g) {
  if (!g.valid()) throw InvalidElement("kappa_append: element not in G(n)");
  return embed_block(g, g.n() + 1, 0);
}

GroupElement embed_block(const GroupElement& g, int n, int off) {
  const int k = g.n();
  if (off < 0 || off + k > n) throw DimensionError("embed_block: block does not fit");
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n + 2, n + 2);
  h.block(off, off, k, k) = g.A();
  h.block(off, n, k, 2) = g.B();
  h.block(n, off, 2, k) = g.C();
  h.block(n, n, 2, 2) = g.D();
  return GroupElement(h);
}

GroupElement rotation_element(const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(Q.rows());
  GroupElement g = GroupElement::identity(n);
  g.M.topLeftCorner(n, n) = Q;
  return g;
}

GroupElement phase_element(int n, double theta) {
  GroupElement g = GroupElement::identity(n);
  g.M.bottomRightCorner(2, 2) = rot2(theta);
  return g;
}

GroupElement frame_element(const Frame& f) {
  GroupElement g = rotation_element(f.A);
  g.M.bottomRightCorner(2, 2) = rot2(-std::arg(f.eta));
  return g;
}

GroupElement boost(int n, int j, int k, double s) {
  GroupElement g = GroupElement::identity(n);
  g.M(j, j) = g.M(k, k) = std::cosh(s);
  g.M(j, k) = g.M(k, j) = std::sinh(s);
  return g;
}

GroupElement bidisc_phase(double a1, double a2) {
  GroupElement g = GroupElement::identity(2);
  g.M.topLeftCorner(2, 2) = rot2((a1 - a2) / 2);
  g.M.bottomRightCorner(2, 2) = rot2(-(a1 + a2) / 2);
  return g;
}

GroupElement bidisc_mobius(cplx beta1, cplx beta2) {
  if (std::abs(beta1) >= 1 || std::abs(beta2) >= 1) throw DomainError("bidisc_mobius: |beta| >= 1");
  double r1 = 2 * std::atanh(std::abs(beta1));
  double r2 = 2 * std::atanh(std::abs(beta2));
  double f1 = std::arg(beta1), f2 = std::arg(beta2);
  GroupElement h = boost(2, 0, 2, (-r1 - r2) / 2) * boost(2, 1, 3, (-r1 + r2) / 2);
  return bidisc_phase(f1, f2) * h * bidisc_phase(-f1, -f2);
}

GroupElement bidisc_flip() {
  GroupElement g = GroupElement::identity(2);
  g.M(1, 1) = -1;
  return g;
}

Point LhatAutomorphism::apply(const Point& w, int branch) const {
  if (w.size() != n()) throw DimensionError("LHat automorphism: dimension mismatch");
  return lambda_map(apply_mobius(kg, lambda_lift(w, branch)));
}

LhatAutomorphism LhatAutomorphism::inverse() const { return descend(g.inverse()); }

LhatAutomorphism LhatAutomorphism::operator*(const LhatAutomorphism& o) const { return descend(g * o.g); }

LhatAutomorphism descend(const GroupElement& g) { return {g, kappa_lift(g)}; }

LhatAutomorphism extend_lhat(const LhatAutomorphism& phi) { return descend(kappa_append(phi.g)); }

GroupElement lie_ball_to_origin(const Point& z) {
  const int n = static_cast<int>(z.size());
  if (n < 2) throw DimensionError("lie_ball_to_origin: need n >= 2");
  if (!in_lie_ball(z)) throw DomainError("lie_ball_to_origin: point outside the Lie ball");
  Frame f = normal_frame(z);
  Point y = apply_frame(f, z);
  // zeta = (y1 + i y2, y1 - i y2) = (a - b, a + b) in the bidisc picture
  cplx zeta1 = y[0] + cplx(0, 1) * y[1];
  cplx zeta2 = y[0] - cplx(0, 1) * y[1];
  return embed_block(bidisc_mobius(zeta1, zeta2), n, 0) * frame_element(f);
}

Point tetra_from_lhat3(const Point& z) {
  if (z.size() != 3) throw DimensionError("tetra_from_lhat3: need 3 coordinates");
  const cplx I(0, 1);
  Point x(3);
  x << z[1] + I * z[2], z[1] - I * z[2], z[0] + z[1] * z[1] + z[2] * z[2];
  return x;
}

Point lhat3_from_tetra(const Point& x) {
  if (x.size() != 3) throw DimensionError("lhat3_from_tetra: need 3 coordinates");
  Point z(3);
  z << x[2] - x[0] * x[1], (x[0] + x[1]) / 2.0, (x[0] - x[1]) / cplx(0, 2);
  return z;
}

TetraMobius TetraMobius::inverse() const {
  TetraMobius r;
  cplx b1 = flip ? beta2 : beta1, b2 = flip ? beta1 : beta2;
  // scale then swap then Mobius: m_B o E_eta = E_eta o m_{conj(eta) B}, m_B o S = S o m_{S B}
  r.beta1 = -eta1 * b1;
  r.beta2 = -eta2 * b2;
  r.flip = flip;
  r.eta1 = std::conj(flip ? eta2 : eta1);
  r.eta2 = std::conj(flip ? eta1 : eta2);
  return r;
}

GroupElement TetraMobius::lhat3_element() const {
  GroupElement g = bidisc_mobius(beta1, beta2);
  if (flip) g = bidisc_flip() * g;
  return bidisc_phase(std::arg(eta1), std::arg(eta2)) * g;
}

Point tetra_mobius_apply(const TetraMobius& m, const Point& x) {
  if (x.size() != 3) throw DimensionError("tetra_mobius_apply: need 3 coordinates");
  const cplx x1 = x[0], x2 = x[1], x3 = x[2];
  const cplx P = x1 * x2 - x3;
  const cplx c1 = std::conj(m.beta1), c2 = std::conj(m.beta2);
  const cplx den = (1.0 - c1 * x1) * (1.0 - c2 * x2) - c1 * c2 * P;
  if (std::abs(den) < 1e-13) throw SingularityError("tetra_mobius_apply: vanishing denominator");
  cplx y1 = ((x1 - m.beta1) * (1.0 - c2 * x2) + c2 * P) / den;
  cplx y2 = ((x2 - m.beta2) * (1.0 - c1 * x1) + c1 * P) / den;
  cplx y3 = ((x1 - m.beta1) * (x2 - m.beta2) - P) / den;
  if (m.flip) std::swap(y1, y2);
  Point y(3);
  y << m.eta1 * y1, m.eta2 * y2, m.eta1 * m.eta2 * y3;
  return y;
}

namespace {

Eigen::Vector4d normalizer_residual(const Point& x, const Eigen::Vector4d& v) {
  TetraMobius m;
  m.beta1 = {v[0], v[1]};
  m.beta2 = {v[2], v[3]};
  Point y = tetra_mobius_apply(m, x);
  return {y[0].real(), y[0].imag(), y[1].real(), y[1].imag()};
}

bool inside_bidisc(const Eigen::Vector4d& v) {
  return std::hypot(v[0], v[1]) < 1 && std::hypot(v[2], v[3]) < 1;
}

double newton_normalizer(const Point& x, Eigen::Vector4d& v) {
  double r = 1e300;
  try {
    r = normalizer_residual(x, v).cwiseAbs().maxCoeff();
  } catch (const SingularityError&) {
    return r;
  }
  for (int it = 0; it < 100 && r > 1e-12; ++it) {
    Eigen::Vector4d F = normalizer_residual(x, v);
    Eigen::Matrix4d Jm;
    for (int j = 0; j < 4; ++j) {
      double h = 1e-7;
      Eigen::Vector4d vp = v, vm = v;
      vp[j] += h;
      vm[j] -= h;
      if (!inside_bidisc(vp) || !inside_bidisc(vm)) {
        h = 1e-9;
        vp = v;
        vm = v;
        vp[j] += h;
        vm[j] -= h;
      }
      Jm.col(j) = (normalizer_residual(x, vp) - normalizer_residual(x, vm)) / (2 * h);
    }
    Eigen::Vector4d step = -Jm.colPivHouseholderQr().solve(F);
    if (!step.allFinite()) break;
    double t = 1;
    bool moved = false;
    while (t > 1e-8) {
      Eigen::Vector4d vn = v + t * step;
      if (inside_bidisc(vn)) {
        try {
          double rn = normalizer_residual(x, vn).cwiseAbs().maxCoeff();
          if (rn < r) {
            v = vn;
            r = rn;
            moved = true;
            break;
          }
        } catch (const SingularityError&) {
        }
      }
      t /= 2;
    }
    if (!moved) break;
  }
  return r;
}

}  // namespace

TetraMobius tetra_normalizer(const Point& x, double* residual, unsigned seed) {
  if (!in_tetrablock(x)) throw DomainError("tetra_normalizer: point outside the tetrablock");
  Eigen::Vector4d v(x[0].real(), x[0].imag(), x[1].real(), x[1].imag());
  double r = newton_normalizer(x, v);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(0, 1);
  for (int s = 0; s < 8 && r > 1e-12; ++s) {
    Eigen::Vector4d w;
    for (int j = 0; j < 2; ++j) {
      double rad = std::sqrt(U(gen)), th = 2 * M_PI * U(gen);
      w[2 * j] = rad * std::cos(th);
      w[2 * j + 1] = rad * std::sin(th);
    }
    double rw = newton_normalizer(x, w);
    if (rw < r) {
      r = rw;
      v = w;
    }
  }
  if (residual) *residual = r;
  if (r > 1e-10) throw NormalizationFailure("tetra_normalizer: Newton did not converge", r);
  TetraMobius m;
  m.beta1 = {v[0], v[1]};
  m.beta2 = {v[2], v[3]};
  Point y = tetra_mobius_apply(m, x);
  if (std::abs(y[2]) > 0) m.eta1 = std::conj(y[2]) / std::abs(y[2]);
  return m;
}

NormalizedPoint normalize_point_lhat(const Point& z) {
  const int n = static_cast<int>(z.size());
  if (n < 3) throw DimensionError("normalize_point_lhat: need n >= 3");
  if (!in_lhat(z)) throw DomainError("normalize_point_lhat: point outside LHat");

  PartialFrame pf = partial_normal_frame(z, 1);
  GroupElement rot = rotation_element(pf.frame.A.bottomRightCorner(n - 1, n - 1));
  Point z1 = descend(rot).apply(z);

  Point x = tetra_from_lhat3(z1.head(3));
  NormalizedPoint out;
  out.tetra = tetra_normalizer(x, &out.residual);
  GroupElement h = embed_block(out.tetra.lhat3_element(), n - 1, 0) * rot;
  out.map = descend(h);

  Point img = out.map.apply(z);
  out.rho = std::abs(tetra_mobius_apply(out.tetra, x)[2]);
  Point target = Point::Zero(n);
  target[0] = out.rho;
  double err = (img - target).cwiseAbs().maxCoeff();
  if (!(err <= 1e-8)) throw NormalizationFailure("normalize_point_lhat: image is not in normal form", err);
  return out;
}

NormalizedPair normalize_pair(const Point& z, const Point& w) {
  const int n = static_cast<int>(z.size());
  if (w.size() != n) throw DimensionError("normalize_pair: dimension mismatch");
  if (!in_lhat(w)) throw DomainError("normalize_pair: second point outside LHat");
  NormalizedPoint np = normalize_point_lhat(z);
  LhatAutomorphism map = np.map;
  if (n >= 4) {
    Point w1 = map.apply(w);
    PartialFrame pf = partial_normal_frame(w1, 1);
    map = descend(rotation_element(pf.frame.A.bottomRightCorner(n - 1, n - 1))) * map;
  }
  NormalizedPair out;
  out.map = map;
  out.rho = np.rho;
  out.z = map.apply(z);
  out.w = map.apply(w);
  return out;
}

}  // namespace lempertlab
