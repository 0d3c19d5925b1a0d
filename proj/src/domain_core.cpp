#include "lempertlab/domain_core.hpp"

#include <algorithm>
#include <cmath>

namespace lempertlab {

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::LieBall: return "lieball";
    case DomainKind::LHat: return "lhat";
    case DomainKind::Tetrablock: return "tetra";
    case DomainKind::UnitDisc: return "disc";
  }
  return "?";
}

DomainKind domain_from_string(const std::string& s) {
  if (s == "lieball" || s == "lie") return DomainKind::LieBall;
  if (s == "lhat") return DomainKind::LHat;
  if (s == "tetra" || s == "tetrablock") return DomainKind::Tetrablock;
  if (s == "disc") return DomainKind::UnitDisc;
  throw std::invalid_argument("unknown domain '" + s + "'");
}

cplx hermitian_inner(const Point& z, const Point& w) {
  if (z.size() != w.size()) throw DimensionError("hermitian_inner: length mismatch");
  cplx s = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) s += z[j] * std::conj(w[j]);
  return s;
}

cplx symmetric_square(const Point& z) {
  cplx s = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) s += z[j] * z[j];
  return s;
}

Moduli moduli(const Point& z) {
  double n2 = z.squaredNorm();
  double q = std::abs(symmetric_square(z));
  return {std::sqrt(std::max(0.0, (n2 + q) / 2)), std::sqrt(std::max(0.0, (n2 - q) / 2))};
}

double gauge_p(const Point& z) {
  Moduli m = moduli(z);
  return m.a + m.b;
}

bool in_lie_ball(const Point& z) {
  double n2 = z.squaredNorm();
  double q = std::abs(symmetric_square(z));
  return n2 < 1 && 2 * n2 < 1 + q * q;
}

bool in_lhat(const Point& z) {
  if (z.size() < 1) throw DimensionError("in_lhat: empty point");
  Point t = z.tail(z.size() - 1);
  double a1 = std::abs(z[0]);
  double t2 = t.squaredNorm();
  double q = std::abs(z[0] + symmetric_square(t));
  return a1 + t2 < 1 && 2 * a1 + 2 * t2 < 1 + q * q;
}

bool in_tetrablock(const Point& x) {
  if (x.size() != 3) throw DimensionError("in_tetrablock: need 3 coordinates");
  double l = std::norm(x[0]) + std::norm(x[1]) + 2 * std::abs(x[0] * x[1] - x[2]);
  return l < 1 + std::norm(x[2]) && std::abs(x[2]) < 1;
}

bool in_domain(DomainKind k, const Point& z) {
  switch (k) {
    case DomainKind::LieBall: return in_lie_ball(z);
    case DomainKind::LHat: return in_lhat(z);
    case DomainKind::Tetrablock: return in_tetrablock(z);
    case DomainKind::UnitDisc:
      if (z.size() != 1) throw DimensionError("unit disc points have one coordinate");
      return std::abs(z[0]) < 1;
  }
  return false;
}

double lhat_gauge(const Point& w) {
  if (w.size() < 1) throw DimensionError("lhat_gauge: empty point");
  Point t = w.tail(w.size() - 1);
  double n2 = std::abs(w[0]) + t.squaredNorm();
  double q = std::abs(w[0] + symmetric_square(t));
  return std::sqrt(n2 + std::sqrt(std::max(0.0, n2 * n2 - q * q)));
}

bool in_lhat_margin(const Point& w, double eps) { return lhat_gauge(w) < 1 - eps; }

double tetra_gauge(const Point& x) {
  if (x.size() != 3) throw DimensionError("tetra_gauge: need 3 coordinates");
  Point z(3);
  z << x[2] - x[0] * x[1], (x[0] + x[1]) / 2.0, (x[0] - x[1]) / cplx(0, 2);
  return lhat_gauge(z);
}

Point lambda_map(const Point& z) {
  if (z.size() < 1) throw DimensionError("lambda_map: empty point");
  Point r = z;
  r[0] = z[0] * z[0];
  return r;
}

Point lambda_lift(const Point& w, int branch) {
  if (w.size() < 1) throw DimensionError("lambda_lift: empty point");
  Point r = w;
  r[0] = std::sqrt(w[0]) * (branch < 0 ? -1.0 : 1.0);
  return r;
}

Point project_pi(const Point& z) {
  if (z.size() < 2) throw DimensionError("project_pi: need at least 2 coordinates");
  return z.head(z.size() - 1);
}

Point embed_q(const Point& z) {
  if (z.size() < 1) throw DimensionError("embed_q: empty point");
  Point r = Point::Zero(z.size() + 1);
  r.head(z.size()) = z;
  return r;
}

bool all_finite(const Point& z) {
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (!std::isfinite(z[j].real()) || !std::isfinite(z[j].imag())) return false;
  return true;
}

bool approx_equal(const Point& z, const Point& w, double tol) {
  if (z.size() != w.size()) return false;
  return (z - w).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace lempertlab
