#include "lempertlab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lempertlab {

double atanh_clamped(double t) { return std::atanh(std::clamp(t, 0.0, 1 - 1e-15)); }

double poincare(cplx a, cplx b) {
  if (std::abs(a) >= 1 || std::abs(b) >= 1) throw DomainError("poincare: point outside the unit disc");
  double num = std::abs(a - b);
  double den = std::abs(1.0 - std::conj(a) * b);
  if (num < 0.5 * den) return std::atanh(num / den);
  // 1 - m^2 = (1-|a|^2)(1-|b|^2)/|1 - conj(a) b|^2, accurate near the circle
  double s = (1 - std::norm(a)) * (1 - std::norm(b));
  return 0.5 * std::log((den + num) * (den + num) / s);
}

double carath_origin_tetra(const Point& x) {
  if (!in_tetrablock(x)) throw DomainError("carath_origin_tetra: point outside the tetrablock");
  cplx x1 = x[0], x2 = x[1], x3 = x[2];
  if (std::abs(x1) > std::abs(x2)) std::swap(x1, x2);
  double v = (std::abs(x2 - std::conj(x1) * x3) + std::abs(x1 * x2 - x3)) / (1 - std::norm(x1));
  return atanh_clamped(v);
}

LhatOriginForms carath_origin_lhat_forms(const Point& z) {
  if (!in_lhat(z)) throw DomainError("carath_origin_lhat: point outside LHat");
  const cplx z1 = z[0];
  Point t = z.tail(z.size() - 1);
  if (t.size() == 0 || t.norm() == 0) return {std::abs(z1), std::abs(z1)};

  cplx q = symmetric_square(t);
  Moduli mo = moduli(t);
  double p = mo.a + mo.b, m = mo.a - mo.b;
  double aq = std::abs(q);

  LhatOriginForms f;
  double den = p * p - aq * aq;
  f.printed = p * std::abs(1.0 - z1 * std::conj(q) / den) + std::abs(z1) * p * p / den;

  cplx eta = 1.0;
  if (aq >= 1e-14) eta = std::polar(1.0, -std::arg(q) / 2);
  f.eta_form = std::abs(std::conj(eta) * p - eta * z1 * m / (1 - m * m)) + std::abs(z1) / (1 - m * m);
  return f;
}

double carath_origin_lhat(const Point& z) {
  LhatOriginForms f = carath_origin_lhat_forms(z);
  if (std::abs(f.printed - f.eta_form) > 1e-8)
    throw FormulaInconsistency("carath_origin_lhat: printed and eta forms disagree");
  return atanh_clamped(f.eta_form);
}

double carath_origin_lhat3(const Point& z) {
  if (z.size() != 3) throw DimensionError("carath_origin_lhat3: need 3 coordinates");
  if (!in_lhat(z)) throw DomainError("carath_origin_lhat3: point outside LHat(3)");
  const cplx I(0, 1);
  cplx z1 = z[0], z2 = z[1], z3 = z[2];
  if (std::abs(z2 + I * z3) > std::abs(z2 - I * z3)) z3 = -z3;
  cplx s = z2 + I * z3;
  double d = 1 - std::norm(s);
  return atanh_clamped(std::abs(z2 - I * z3 - z1 * std::conj(s) / d) + std::abs(z1) / d);
}

double carath_origin_lieball(const Point& z) {
  if (!in_lie_ball(z)) throw DomainError("carath_origin_lieball: point outside the Lie ball");
  return atanh_clamped(gauge_p(z));
}

double kobayashi_origin_tetra(const Point& X) {
  if (X.size() != 3) throw DimensionError("kobayashi_origin_tetra: need 3 coordinates");
  return std::max(std::abs(X[0]), std::abs(X[1])) + std::abs(X[2]);
}

double kobayashi_origin_lhat(const Point& X) {
  if (X.size() < 2) throw DimensionError("kobayashi_origin_lhat: need n >= 2");
  return std::abs(X[0]) + gauge_p(X.tail(X.size() - 1));
}

double kobayashi_origin_lhat3_max(const Point& X) {
  if (X.size() != 3) throw DimensionError("kobayashi_origin_lhat3_max: need 3 coordinates");
  const cplx I(0, 1);
  return std::abs(X[0]) + std::max(std::abs(X[1] + I * X[2]), std::abs(X[1] - I * X[2]));
}

}  // namespace lempertlab
