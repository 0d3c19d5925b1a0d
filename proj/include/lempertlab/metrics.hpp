#pragma once

#include "lempertlab/domain_core.hpp"

namespace lempertlab {

struct FormulaInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double atanh_clamped(double t);

double poincare(cplx a, cplx b);

double carath_origin_tetra(const Point& x);

struct LhatOriginForms {
  double printed = 0;  // the closed formula in terms of p(z') and <z', conj z'>
  double eta_form = 0; // the form written with eta and m = a(z') - b(z')
};

// Both arguments of tanh^{-1}, before inversion.
LhatOriginForms carath_origin_lhat_forms(const Point& z);
double carath_origin_lhat(const Point& z);
double carath_origin_lhat3(const Point& z);
double carath_origin_lieball(const Point& z);

double kobayashi_origin_tetra(const Point& X);
double kobayashi_origin_lhat(const Point& X);
// |X1| + max(|X2 + i X3|, |X2 - i X3|)
double kobayashi_origin_lhat3_max(const Point& X);

}  // namespace lempertlab
