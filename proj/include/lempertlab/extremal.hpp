#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lempertlab/automorphisms.hpp"

namespace lempertlab {

struct SearchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericsParams {
  int disc_degree = 6;
  int boundary_grid = 512;
  double margin = 1e-6;
  int restarts = 4;
  double sigma_tol = 1e-4;  // bisection tolerance, applied to tanh^{-1}(sigma)
  int lambda_grid = 720;
  double lambda_tol = 1e-10;
  int tetra_perturbations = 16;
  int chain_levels = 400;
  double chain_tol = 1e-13;
  int lift_starts = 8;
  bool use_polynomial = true;
  bool use_matrix_lift = true;
  bool use_chain = true;
  // Taylor coefficients of the matrix-lift disc seed the polynomial search
  bool seed_from_lift = true;
  unsigned seed = 0;
};

enum class SliceFamily { G, H };

// G_lambda(x) = (x2 - lambda x3)/(1 - lambda x1); H swaps x1 and x2
cplx tetra_slice_function(cplx lambda, const Point& x, SliceFamily f = SliceFamily::G);

// lambda_k(x) = m_{-a}(k * m_u(F_{k-1}(x))), m_c(t) = (t - c)/(1 - conj(c) t), |k| <= 1
struct ChainLink {
  SliceFamily family = SliceFamily::G;
  cplx u = 0, k = 1, a = 0;
};

// A holomorphic function from the domain into the unit disc.
struct CaratheodoryWitness {
  DomainKind kind = DomainKind::LHat;
  int dim = 0;
  SliceFamily family = SliceFamily::G;
  cplx lambda = 1;
  TetraMobius pre;
  std::vector<ChainLink> chain;
  std::optional<LhatAutomorphism> frame;  // LHat: normalizing automorphism
  std::optional<GroupElement> ball_frame; // LieBall: Psi_g sends the first point to 0
  Eigen::VectorXcd functional;            // LieBall: linear functional after ball_frame

  cplx tetra_value(const Point& x) const;  // on the tetrablock coordinates after pre
  cplx operator()(const Point& z) const;
};

struct LowerBound {
  double value = 0;
  CaratheodoryWitness witness;
  int levels = 0;
};

LowerBound caratheodory_lower(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm = {});

enum class DiscKind { Constant, Polynomial, MatrixLift };

std::string to_string(DiscKind k);

struct AnalyticDisc {
  DomainKind kind = DomainKind::LHat;
  DiscKind type = DiscKind::Constant;
  int dim = 0;        // dimension of the target domain
  Point z, w;         // interpolation data: f(0) = z, f(sigma) = w
  double sigma = 0;
  // Polynomial: row j is the coefficient of lambda^j, in the working coordinates
  Eigen::MatrixXcd coeffs;
  // MatrixLift: lambda -> pi(theta_{M0}^{-1}(r lambda K)) in the tetrablock
  Eigen::Matrix2cd M0, K;
  double r = 1;
  // working coordinates -> domain coordinates
  std::optional<LhatAutomorphism> frame_inv;
  std::optional<GroupElement> ball_inv;
  int work_dim = 0;

  Point eval(cplx lambda) const;
  Point eval_work(cplx lambda) const;
  double boundary_max_gauge(int samples) const;
};

double domain_gauge(DomainKind kind, const Point& z);

struct UpperBound {
  double value = 0;
  double sigma = 0;
  AnalyticDisc disc;
  double boundary_max = 0;
  double poly_value = std::numeric_limits<double>::infinity();
  double lift_value = std::numeric_limits<double>::infinity();
};

UpperBound lempert_upper(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm = {},
                         double lower_hint = 0);

// upper bound for the Kobayashi metric at 0 in direction X from polynomial discs
double kobayashi_upper_origin(DomainKind kind, const Point& X, const NumericsParams& prm = {});

struct DistanceReport {
  Point z, w;
  double c_lower = 0, l_upper = 0, gap = 0, sigma = 0;
  cplx witness_lambda = 1;
  int chain_levels = 0;
  std::string disc_family;
  double poly_upper = std::numeric_limits<double>::infinity();
  double seconds = 0;
  bool ok = false;
  std::string error;
  LowerBound lower;
  UpperBound upper;
};

struct GapSummary {
  int pairs = 0, failures = 0;
  double max_gap = 0, median_gap = 0;
  int within = 0;  // gap <= tolerance
  bool sound = true;  // c_lower <= l_upper + 1e-9 on every successful pair
};

DistanceReport distance_report(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm);
std::vector<DistanceReport> lempert_gap_report(DomainKind kind, const std::vector<std::pair<Point, Point>>& pairs,
                                               const NumericsParams& prm, int jobs = 1);
GapSummary summarize(const std::vector<DistanceReport>& reports, double tolerance);

}  // namespace lempertlab
