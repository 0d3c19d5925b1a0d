#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lempertlab {

struct MinResult {
  Eigen::VectorXd x;
  double f = 0;
  int iterations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using ObjectiveGrad = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

// GSL nmsimplex2; stops when the simplex size drops below size_tol
MinResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step, double size_tol = 1e-10,
                      int max_iter = 4000);

// minimum of f on [a, b] given an interior point m with f(m) <= f(a), f(b)
double golden_section(const std::function<double(double)>& f, double a, double m, double b, double tol = 1e-10);

// GSL vector_bfgs2
MinResult bfgs(const ObjectiveGrad& f, const Eigen::VectorXd& x0, double grad_tol = 1e-10, int max_iter = 400);

}  // namespace lempertlab
