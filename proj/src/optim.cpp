#include "lempertlab/optim.hpp"

#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

namespace lempertlab {

namespace {

// switched off once; toggling it per call would race between worker threads
struct GslErrorsOff {
  GslErrorsOff() {
    static const bool once = (gsl_set_error_handler_off(), true);
    (void)once;
  }
};

Eigen::Map<const Eigen::VectorXd> view(const gsl_vector* v) {
  return {gsl_vector_const_ptr(v, 0), static_cast<Eigen::Index>(v->size)};
}

struct FdfCtx {
  const ObjectiveGrad* f;
  Eigen::VectorXd g;
};

double fdf_f(const gsl_vector* x, void* p) {
  auto* c = static_cast<FdfCtx*>(p);
  Eigen::VectorXd xv = view(x);
  return (*c->f)(xv, nullptr);
}

void fdf_df(const gsl_vector* x, void* p, gsl_vector* g) {
  auto* c = static_cast<FdfCtx*>(p);
  Eigen::VectorXd xv = view(x);
  (*c->f)(xv, &c->g);
  for (Eigen::Index i = 0; i < c->g.size(); ++i) gsl_vector_set(g, i, c->g[i]);
}

void fdf_fdf(const gsl_vector* x, void* p, double* f, gsl_vector* g) {
  auto* c = static_cast<FdfCtx*>(p);
  Eigen::VectorXd xv = view(x);
  *f = (*c->f)(xv, &c->g);
  for (Eigen::Index i = 0; i < c->g.size(); ++i) gsl_vector_set(g, i, c->g[i]);
}

}  // namespace

MinResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step, double size_tol, int max_iter) {
  GslErrorsOff guard;
  const size_t n = x0.size();
  MinResult res{x0, f(x0), 0};
  if (n == 0) return res;

  auto thunk = [](const gsl_vector* x, void* p) -> double {
    Eigen::VectorXd xv = view(x);
    double v = (*static_cast<const Objective*>(p))(xv);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  gsl_multimin_function fn{thunk, n, const_cast<Objective*>(&f)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  if (s->fval < res.f) {
    res.x = view(s->x);
    res.f = s->fval;
  }
  res.iterations = it;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return res;
}

double golden_section(const std::function<double(double)>& f, double a, double m, double b, double tol) {
  GslErrorsOff guard;
  auto thunk = [](double t, void* p) -> double { return (*static_cast<const std::function<double(double)>*>(p))(t); };
  gsl_function fn{thunk, const_cast<std::function<double(double)>*>(&f)};
  gsl_min_fminimizer* s = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
  double fa = f(a), fm = f(m), fb = f(b);
  if (!(fm < fa && fm < fb) || gsl_min_fminimizer_set_with_values(s, &fn, m, fm, a, fa, b, fb) != GSL_SUCCESS) {
    gsl_min_fminimizer_free(s);
    return fm <= fa && fm <= fb ? m : (fa < fb ? a : b);
  }
  for (int it = 0; it < 200; ++it) {
    if (gsl_min_fminimizer_iterate(s)) break;
    double lo = gsl_min_fminimizer_x_lower(s), hi = gsl_min_fminimizer_x_upper(s);
    if (hi - lo < tol) break;
  }
  double x = gsl_min_fminimizer_x_minimum(s);
  gsl_min_fminimizer_free(s);
  return x;
}

MinResult bfgs(const ObjectiveGrad& f, const Eigen::VectorXd& x0, double grad_tol, int max_iter) {
  GslErrorsOff guard;
  const size_t n = x0.size();
  FdfCtx ctx{&f, Eigen::VectorXd(n)};
  gsl_multimin_function_fdf fn{fdf_f, fdf_df, fdf_fdf, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  for (size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &fn, x, 1e-3, 0.1);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s)) break;
    if (gsl_multimin_test_gradient(s->gradient, grad_tol) == GSL_SUCCESS) break;
  }
  MinResult res{view(s->x), s->f, it};
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return res;
}

}  // namespace lempertlab
