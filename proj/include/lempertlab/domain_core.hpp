#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lempertlab {

using cplx = std::complex<double>;
using Point = Eigen::VectorXcd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DomainKind { LieBall, LHat, Tetrablock, UnitDisc };

std::string to_string(DomainKind k);
DomainKind domain_from_string(const std::string& s);

struct Moduli {
  double a = 0;
  double b = 0;
};

cplx hermitian_inner(const Point& z, const Point& w);
// sum of z_j^2, the bilinear <z, conj z>
cplx symmetric_square(const Point& z);
Moduli moduli(const Point& z);
double gauge_p(const Point& z);

bool in_lie_ball(const Point& z);
bool in_lhat(const Point& z);
bool in_tetrablock(const Point& x);
bool in_domain(DomainKind k, const Point& z);

// u(w) = p(sqrt(w1), w'); does not depend on the root. u is continuous and
// plurisubharmonic and LHat = {u < 1}, so max of u on the boundary circle
// certifies a holomorphic disc.
double lhat_gauge(const Point& w);
bool in_lhat_margin(const Point& w, double eps);

// Same role for the tetrablock, through its identification with LHat(3).
double tetra_gauge(const Point& x);

Point lambda_map(const Point& z);
Point lambda_lift(const Point& w, int branch = 1);
Point project_pi(const Point& z);
Point embed_q(const Point& z);

bool all_finite(const Point& z);
bool approx_equal(const Point& z, const Point& w, double tol = 1e-12);

}  // namespace lempertlab
