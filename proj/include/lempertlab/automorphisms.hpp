#pragma once

#include "lempertlab/domain_core.hpp"
#include "lempertlab/rotations.hpp"

namespace lempertlab {

// Real (n+2)x(n+2) matrix g = [A B; C D] with g^T J g = J, J = diag(Id_n, -Id_2), det D > 0.
struct GroupElement {
  Eigen::MatrixXd M;

  GroupElement() = default;
  explicit GroupElement(Eigen::MatrixXd m) : M(std::move(m)) {}
  static GroupElement identity(int n);

  int n() const { return static_cast<int>(M.rows()) - 2; }
  Eigen::MatrixXd A() const { return M.topLeftCorner(n(), n()); }
  Eigen::MatrixXd B() const { return M.topRightCorner(n(), 2); }
  Eigen::MatrixXd C() const { return M.bottomLeftCorner(2, n()); }
  Eigen::MatrixXd D() const { return M.bottomRightCorner(2, 2); }

  GroupElement operator*(const GroupElement& h) const;
  GroupElement inverse() const;  // J g^T J
  double j_defect() const;       // max |g^T J g - J|
  bool valid(double tol = 1e-10) const;
};

struct InvalidElement : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Eigen::Vector2cd w_vector(const Point& z);
Point apply_mobius(const GroupElement& g, const Point& z);

GroupElement kappa_lift(const GroupElement& g);
// kappa with the new variable appended: [A 0 B; 0 1 0; C 0 D]
GroupElement kappa_append(const GroupElement& g);
// g in G(k) acting on coordinates off..off+k-1 of C^n, identity elsewhere
GroupElement embed_block(const GroupElement& g, int n, int off = 0);

GroupElement frame_element(const Frame& f);  // Psi = eta*A*z
GroupElement rotation_element(const Eigen::MatrixXd& Q);
GroupElement phase_element(int n, double theta);  // Psi = exp(-i theta) z
GroupElement boost(int n, int j, int k, double s);

// Elements of G(2). In the coordinates zeta1 = z1 + i z2, zeta2 = z1 - i z2 the
// Lie ball L_2 is the bidisc, and these act factorwise.
GroupElement bidisc_phase(double a1, double a2);       // zeta_j -> exp(i a_j) zeta_j
GroupElement bidisc_mobius(cplx beta1, cplx beta2);    // zeta_j -> (zeta_j - b_j)/(1 - conj(b_j) zeta_j)
GroupElement bidisc_flip();                            // zeta1 <-> zeta2

struct LhatAutomorphism {
  GroupElement g;   // in G(n-1)
  GroupElement kg;  // kappa(g)

  int n() const { return g.n() + 1; }
  Point apply(const Point& w, int branch = 1) const;
  LhatAutomorphism inverse() const;
  LhatAutomorphism operator*(const LhatAutomorphism& o) const;
};

LhatAutomorphism descend(const GroupElement& g);
LhatAutomorphism extend_lhat(const LhatAutomorphism& phi);

GroupElement lie_ball_to_origin(const Point& z);

Point tetra_from_lhat3(const Point& z);
Point lhat3_from_tetra(const Point& x);

struct TetraMobius {
  cplx beta1 = 0, beta2 = 0;
  cplx eta1 = 1, eta2 = 1;
  bool flip = false;

  TetraMobius inverse() const;
  // the G(2) element whose descent to LHat(3) is this map after tetra_from_lhat3
  GroupElement lhat3_element() const;
};

Point tetra_mobius_apply(const TetraMobius& m, const Point& x);

struct NormalizationFailure : std::runtime_error {
  double residual;
  NormalizationFailure(const std::string& msg, double r) : std::runtime_error(msg), residual(r) {}
};

struct NormalizedPoint {
  LhatAutomorphism map;
  double rho = 0;
  TetraMobius tetra;  // the tetrablock step used inside the map
  double residual = 0;
};

struct NormalizedPair {
  LhatAutomorphism map;
  Point z, w;  // images: z = (rho, 0, ..., 0), w in LHat(3) x {0}
  double rho = 0;
};

// Newton solve for (beta1, beta2) with the first two coordinates of the image zero.
TetraMobius tetra_normalizer(const Point& x, double* residual = nullptr, unsigned seed = 0);

NormalizedPoint normalize_point_lhat(const Point& z);
NormalizedPair normalize_pair(const Point& z, const Point& w);

}  // namespace lempertlab
