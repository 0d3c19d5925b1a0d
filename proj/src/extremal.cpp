#include "lempertlab/extremal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "lempertlab/metrics.hpp"
#include "lempertlab/optim.hpp"
#include "lempertlab/rotations.hpp"
#include "lempertlab/sampling.hpp"

namespace lempertlab {

namespace {

constexpr double kPi = std::numbers::pi;

cplx mob(cplx c, cplx t) { return (t - c) / (1.0 - std::conj(c) * t); }

cplx unit(double th) { return std::polar(1.0, th); }

void check_pair(DomainKind kind, const Point& z, const Point& w, const char* who) {
  if (z.size() != w.size() || z.size() == 0) throw DimensionError(std::string(who) + ": dimension mismatch");
  if (kind == DomainKind::Tetrablock && z.size() != 3) throw DimensionError(std::string(who) + ": tetrablock needs 3");
  if (kind == DomainKind::UnitDisc && z.size() != 1) throw DimensionError(std::string(who) + ": disc needs 1");
  if (!in_domain(kind, z) || !in_domain(kind, w)) throw DomainError(std::string(who) + ": point outside the domain");
}

// ---- working coordinates ----
// LHat and Tetrablock pairs are moved to z = (rho, 0, ..., 0), w in LHat(3) x 0;
// Lie ball pairs to z = 0.

struct Work {
  DomainKind kind;
  int dim = 0;   // original dimension
  int m = 0;     // working dimension
  Point z, w;
  std::optional<LhatAutomorphism> map;  // original -> working (LHat, Tetrablock)
  std::optional<GroupElement> ball;     // original -> working (LieBall)
  bool lhat_gauge = true;
};

Work make_work(DomainKind kind, const Point& z, const Point& w) {
  Work wk;
  wk.kind = kind;
  wk.dim = static_cast<int>(z.size());
  switch (kind) {
    case DomainKind::UnitDisc:
    case DomainKind::LieBall: {
      wk.lhat_gauge = false;
      wk.m = wk.dim;
      if (wk.dim == 1) {
        // z -> (z - z0)/(1 - conj(z0) z) written as an element acting on L_1 is not
        // available through the frame code, so the disc is handled in place
        wk.z = Point::Zero(1);
        wk.w = Point::Constant(1, mob(z[0], w[0]));
      } else {
        wk.ball = lie_ball_to_origin(z);
        wk.z = Point::Zero(wk.dim);
        wk.w = apply_mobius(*wk.ball, w);
      }
      return wk;
    }
    case DomainKind::Tetrablock:
    case DomainKind::LHat: {
      Point zz = kind == DomainKind::Tetrablock ? lhat3_from_tetra(z) : z;
      Point ww = kind == DomainKind::Tetrablock ? lhat3_from_tetra(w) : w;
      if (zz.size() == 2) {
        zz = embed_q(zz);
        ww = embed_q(ww);
      }
      NormalizedPair np = normalize_pair(zz, ww);
      wk.m = static_cast<int>(zz.size());
      wk.map = np.map;
      wk.z = np.z;
      wk.w = np.w;
      return wk;
    }
  }
  throw DomainError("make_work: unknown domain");
}

// ---- gauges with gradient; G = 2 d(gauge)/d(conj W) ----

double lhat_gauge_grad(const Eigen::Ref<const Eigen::RowVectorXcd>& W, Eigen::RowVectorXcd* G) {
  const Eigen::Index m = W.size();
  double a1 = std::abs(W[0]);
  double n2 = a1, tail2 = 0;
  cplx Q = W[0];
  for (Eigen::Index j = 1; j < m; ++j) {
    tail2 += std::norm(W[j]);
    Q += W[j] * W[j];
  }
  n2 += tail2;
  double S = std::sqrt(std::max(0.0, n2 * n2 - std::norm(Q)));
  double u = std::sqrt(n2 + S);
  if (G) {
    G->resize(m);
    double us = std::max(u, 1e-150), Ss = std::max(S, 1e-14);
    Eigen::RowVectorXcd Gn(m), GQ(m);
    Gn[0] = a1 > 0 ? W[0] / a1 : cplx(0);
    GQ[0] = 2.0 * Q;
    for (Eigen::Index j = 1; j < m; ++j) {
      Gn[j] = 2.0 * W[j];
      GQ[j] = 4.0 * Q * std::conj(W[j]);
    }
    Eigen::RowVectorXcd GS = (2 * n2 * Gn - GQ) / (2 * Ss);
    *G = (Gn + GS) / (2 * us);
  }
  return u;
}

double ball_gauge_grad(const Eigen::Ref<const Eigen::RowVectorXcd>& W, Eigen::RowVectorXcd* G) {
  double N = W.squaredNorm();
  cplx q = (W.array() * W.array()).sum();
  double R = std::sqrt(std::max(0.0, N * N - std::norm(q)));
  double p = std::sqrt(N + R);
  if (G) {
    double ps = std::max(p, 1e-150), Rs = std::max(R, 1e-14);
    Eigen::RowVectorXcd GR = (4 * N * W - 4.0 * q * W.conjugate()) / (2 * Rs);
    *G = (2 * W + GR) / (2 * ps);
  }
  return p;
}

double work_gauge(bool lhat, const Point& W) {
  return lhat ? lhat_gauge_grad(W.transpose(), nullptr) : ball_gauge_grad(W.transpose(), nullptr);
}

// ---- minimax of the gauge over the boundary circle ----
// disc values on the grid: base + B * C, C the free coefficients (J x m complex)

struct Minimax {
  Eigen::MatrixXcd base;  // N x m
  Eigen::MatrixXcd B;     // N x J
  bool lhat = true;

  int nvar() const { return static_cast<int>(2 * B.cols() * base.cols()); }

  Eigen::MatrixXcd coeffs(const Eigen::VectorXd& x) const {
    const Eigen::Index J = B.cols(), m = base.cols();
    Eigen::MatrixXcd C(J, m);
    for (Eigen::Index j = 0; j < J; ++j)
      for (Eigen::Index c = 0; c < m; ++c) C(j, c) = cplx(x[2 * (j * m + c)], x[2 * (j * m + c) + 1]);
    return C;
  }

  // gauge values, and gradients (one row per grid point) if asked
  Eigen::VectorXd values(const Eigen::VectorXd& x, Eigen::MatrixXcd* grads) const {
    Eigen::MatrixXcd V = base;
    if (B.cols() > 0) V.noalias() += B * coeffs(x);
    Eigen::VectorXd u(V.rows());
    if (grads) grads->resize(V.rows(), V.cols());
    Eigen::RowVectorXcd g;
    for (Eigen::Index k = 0; k < V.rows(); ++k) {
      u[k] = lhat ? lhat_gauge_grad(V.row(k), grads ? &g : nullptr) : ball_gauge_grad(V.row(k), grads ? &g : nullptr);
      if (grads) grads->row(k) = g;
    }
    return u;
  }

  // gradient in x of sum_k s_k u_k
  Eigen::VectorXd pull_back(const Eigen::VectorXd& s, const Eigen::MatrixXcd& grads) const {
    Eigen::MatrixXcd Gr = B.adjoint() * (s.cast<cplx>().asDiagonal() * grads);
    const Eigen::Index J = B.cols(), m = base.cols();
    Eigen::VectorXd out(2 * J * m);
    for (Eigen::Index j = 0; j < J; ++j)
      for (Eigen::Index c = 0; c < m; ++c) {
        out[2 * (j * m + c)] = Gr(j, c).real();
        out[2 * (j * m + c) + 1] = Gr(j, c).imag();
      }
    return out;
  }

  // max s  subject to  u_k(s base_k + B_k C) <= target; y = (x, s)
  void solve_scale(Eigen::VectorXd& x, double& s, double target, int outer = 30, int inner = 300) const {
    const Eigen::Index nx = x.size();
    auto eval = [&](const Eigen::VectorXd& yy, Eigen::VectorXd* u, Eigen::MatrixXcd* grads) {
      Eigen::MatrixXcd V = yy[nx] * base;
      if (B.cols() > 0) V.noalias() += B * coeffs(yy.head(nx));
      u->resize(V.rows());
      if (grads) grads->resize(V.rows(), V.cols());
      Eigen::RowVectorXcd g;
      for (Eigen::Index k = 0; k < V.rows(); ++k) {
        (*u)[k] = lhat ? lhat_gauge_grad(V.row(k), grads ? &g : nullptr) : ball_gauge_grad(V.row(k), grads ? &g : nullptr);
        if (grads) grads->row(k) = g;
      }
    };
    Eigen::VectorXd u;
    Eigen::VectorXd y(nx + 1);
    y << x, s;
    eval(y, &u, nullptr);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(u.size());
    double rho = 50;
    for (int it = 0; it < outer; ++it) {
      ObjectiveGrad L = [&](const Eigen::VectorXd& yy, Eigen::VectorXd* g) {
        Eigen::VectorXd uu;
        Eigen::MatrixXcd grads;
        eval(yy, &uu, g ? &grads : nullptr);
        Eigen::VectorXd sl = (mu.array() + rho * (uu.array() - target)).max(0.0);
        double val = -yy[nx] + (sl.squaredNorm() - mu.squaredNorm()) / (2 * rho);
        if (g) {
          g->resize(yy.size());
          g->head(nx) = pull_back(sl, grads);
          // du/ds = Re <G, base>
          double ds = 0;
          for (Eigen::Index k = 0; k < uu.size(); ++k)
            if (sl[k] > 0) ds += sl[k] * (grads.row(k).conjugate() * base.row(k).transpose()).value().real();
          (*g)[nx] = -1 + ds;
        }
        return val;
      };
      MinResult r = bfgs(L, y, 1e-10, inner);
      y = r.x;
      eval(y, &u, nullptr);
      mu = (mu.array() + rho * (u.array() - target)).max(0.0);
      double viol = u.maxCoeff() - target;
      if (viol > 1e-10) rho = std::min(rho * 4, 1e10);
      else if (it > 3) break;
    }
    x = y.head(nx);
    s = y[nx];
  }

  // augmented Lagrangian on  min t  s.t.  u_k(x) <= t; stops early once max u <= target
  double solve(Eigen::VectorXd& x, double target, int outer = 25, int inner = 200) const {
    Eigen::VectorXd u = values(x, nullptr);
    double best = u.maxCoeff();
    if (best <= target || nvar() == 0) return best;
    Eigen::VectorXd bestx = x;
    const Eigen::Index N = u.size();
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(N, 1.0 / N);
    double rho = 50;
    double t = best;
    double t_prev = t;
    for (int it = 0; it < outer; ++it) {
      Eigen::VectorXd y(x.size() + 1);
      y << x, t;
      ObjectiveGrad L = [&](const Eigen::VectorXd& yy, Eigen::VectorXd* g) {
        Eigen::VectorXd xx = yy.head(x.size());
        double tt = yy[x.size()];
        Eigen::MatrixXcd grads;
        Eigen::VectorXd uu = values(xx, g ? &grads : nullptr);
        Eigen::VectorXd s = (mu.array() + rho * (uu.array() - tt)).max(0.0);
        double val = tt + (s.squaredNorm() - mu.squaredNorm()) / (2 * rho);
        if (g) {
          g->resize(yy.size());
          g->head(x.size()) = pull_back(s, grads);
          (*g)[x.size()] = 1 - s.sum();
        }
        return val;
      };
      MinResult r = bfgs(L, y, 1e-9, inner);
      x = r.x.head(x.size());
      t = r.x[x.size()];
      u = values(x, nullptr);
      double mx = u.maxCoeff();
      double prev = best;
      if (mx < best) {
        best = mx;
        bestx = x;
      }
      if (best <= target) break;
      // far from the target and barely moving: this sigma is out of reach
      if (it >= 3 && best - target > 20 * (prev - best)) break;
      mu = (mu.array() + rho * (u.array() - t)).max(0.0);
      if (mx - t > 1e-9) rho = std::min(rho * 4, 1e9);
      if (it > 2 && std::abs(t - t_prev) < 1e-11 && mx - t < 1e-9) break;
      t_prev = t;
    }
    x = bestx;
    return best;
  }
};

std::vector<cplx> circle(int N) {
  std::vector<cplx> l(N);
  for (int k = 0; k < N; ++k) l[k] = unit(2 * kPi * k / N);
  return l;
}

// f(l) = z + l (w - z)/sigma + sum_{j>=2} c_j (l^j - l sigma^{j-1})
Minimax interp_problem(const Work& wk, double sigma, int degree, const std::vector<cplx>& grid) {
  const int N = static_cast<int>(grid.size()), J = std::max(0, degree - 1);
  Minimax mm;
  mm.lhat = wk.lhat_gauge;
  mm.base.resize(N, wk.m);
  mm.B.resize(N, J);
  Point d = (wk.w - wk.z) / sigma;
  for (int k = 0; k < N; ++k) {
    mm.base.row(k) = (wk.z + grid[k] * d).transpose();
    cplx lp = grid[k];
    for (int j = 0; j < J; ++j) {
      lp *= grid[k];
      mm.B(k, j) = lp - grid[k] * std::pow(sigma, j + 1);
    }
  }
  return mm;
}

Eigen::MatrixXcd interp_coeffs(const Work& wk, double sigma, int degree, const Eigen::MatrixXcd& C) {
  const int J = std::max(0, degree - 1);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(std::max(degree, 1) + 1, wk.m);
  P.row(0) = wk.z.transpose();
  P.row(1) = ((wk.w - wk.z) / sigma).transpose();
  for (int j = 0; j < J; ++j) {
    P.row(j + 2) = C.row(j);
    P.row(1) -= std::pow(sigma, j + 1) * C.row(j);
  }
  return P;
}

Point horner(const Eigen::MatrixXcd& P, cplx l) {
  Eigen::RowVectorXcd acc = P.row(P.rows() - 1);
  for (Eigen::Index j = P.rows() - 2; j >= 0; --j) acc = acc * l + P.row(j);
  return acc.transpose();
}

double work_boundary_max(const AnalyticDisc& d, int samples) {
  double mx = 0;
  bool lhat = d.kind == DomainKind::LHat || d.kind == DomainKind::Tetrablock;
  for (int k = 0; k < samples; ++k) mx = std::max(mx, work_gauge(lhat, d.eval_work(unit(2 * kPi * k / samples))));
  return mx;
}

// ---- 2x2 matrix ball ----

using M2 = Eigen::Matrix2cd;

M2 psd_sqrt(const M2& H) { return Eigen::SelfAdjointEigenSolver<M2>(H).operatorSqrt(); }
M2 psd_isqrt(const M2& H) { return Eigen::SelfAdjointEigenSolver<M2>(H).operatorInverseSqrt(); }

M2 theta(const M2& A, const M2& Z) {
  const M2 I = M2::Identity();
  return psd_isqrt(I - A * A.adjoint()) * (Z - A) * (I - A.adjoint() * Z).inverse() * psd_sqrt(I - A.adjoint() * A);
}

M2 theta_inv(const M2& A, const M2& X) {
  const M2 I = M2::Identity();
  M2 Y = psd_sqrt(I - A * A.adjoint()) * X * psd_isqrt(I - A.adjoint() * A);
  return (I + Y * A.adjoint()).inverse() * (A + Y);
}

double opnorm(const M2& X) { return Eigen::JacobiSVD<M2>(X).singularValues()[0]; }

Point pi_tetra(const M2& M) {
  Point x(3);
  x << M(0, 0), M(1, 1), M.determinant();
  return x;
}

// lifts of x: diagonal x1, x2 and off-diagonal entries s, t with s t = x1 x2 - x3
struct LiftFamily {
  Point x;
  cplx P;
  double L = 0;     // admissible |log a| when P != 0
  double rmax = 0;  // admissible |s| when P == 0
  int branch = 0;   // P == 0: 0 upper, 1 lower

  explicit LiftFamily(const Point& xx, int br = 0) : x(xx), branch(br) {
    P = x[0] * x[1] - x[2];
    double rest = 1 + std::norm(x[2]) - std::norm(x[0]) - std::norm(x[1]);
    if (std::abs(P) > 0) {
      L = 0.5 * std::acosh(std::max(1.0, rest / (2 * std::abs(P))));
    } else {
      rmax = std::sqrt(std::max(0.0, rest));
    }
  }

  M2 lift(double v0, double v1) const {
    M2 M;
    if (std::abs(P) > 0) {
      double la = L * std::tanh(v0) * (1 - 1e-12);
      cplx a = std::exp(cplx(la, v1));
      cplx sp = std::sqrt(P);
      M << x[0], a * sp, sp / a, x[1];
    } else {
      cplx s = rmax * 0.5 * (1 + std::tanh(v0)) * (1 - 1e-12) * unit(v1);
      if (branch == 0)
        M << x[0], s, 0, x[1];
      else
        M << x[0], 0, s, x[1];
    }
    return M;
  }
};

struct LiftResult {
  double sigma = 1;
  M2 M0, M1;
};

LiftResult lift_search(const Point& X, const Point& Y, const NumericsParams& prm, Rng& rng) {
  LiftResult best;
  std::normal_distribution<double> nd(0, 1.5);
  int bx = (X[0] * X[1] - X[2]) == cplx(0) ? 2 : 1;
  int by = (Y[0] * Y[1] - Y[2]) == cplx(0) ? 2 : 1;
  for (int i = 0; i < bx; ++i)
    for (int j = 0; j < by; ++j) {
      LiftFamily fx(X, i), fy(Y, j);
      auto obj = [&](const Eigen::VectorXd& v) {
        M2 A = fx.lift(v[0], v[1]), Z = fy.lift(v[2], v[3]);
        return opnorm(theta(A, Z));
      };
      for (int s = 0; s < prm.lift_starts; ++s) {
        Eigen::VectorXd v0 = Eigen::VectorXd::Zero(4);
        if (s > 0)
          for (int k = 0; k < 4; ++k) v0[k] = nd(rng);
        MinResult r = nelder_mead(obj, v0, 0.5, 1e-12, 6000);
        r = nelder_mead(obj, r.x, 0.05, 1e-13, 6000);
        if (r.f < best.sigma) {
          best.sigma = r.f;
          best.M0 = fx.lift(r.x[0], r.x[1]);
          best.M1 = fy.lift(r.x[2], r.x[3]);
        }
      }
    }
  return best;
}

// rational disc through the best lifts; the ball radius on the circle stays below 1
std::optional<AnalyticDisc> lift_disc(const Work& wk, const NumericsParams& prm, Rng& rng) {
  Point X = tetra_from_lhat3(wk.z.head(3)), Y = tetra_from_lhat3(wk.w.head(3));
  LiftResult lr = lift_search(X, Y, prm, rng);
  if (!(lr.sigma < 1) || lr.sigma <= 0) return std::nullopt;
  double rep = std::tanh(std::atanh(lr.sigma) + 1e-10);
  if (!(rep < 1)) return std::nullopt;
  AnalyticDisc d;
  d.type = DiscKind::MatrixLift;
  d.M0 = lr.M0;
  d.K = theta(lr.M0, lr.M1) / lr.sigma;
  d.r = lr.sigma / rep;
  d.sigma = rep;
  return d;
}

// Kobayashi bound at 0 in the tetrablock direction Y through the lifts A0 of 0, which have one
// nonzero off-diagonal entry s. d det(A0 + eK)/de = -s k21 (upper) or -s k12 (lower), the other
// off-diagonal entry of K is free, and the ball metric at A0 is |(I-A0A0*)^{-1/2} K (I-A0*A0)^{-1/2}|.
struct KobLift {
  double value = std::numeric_limits<double>::infinity();
  M2 A0, Kt;  // Kt is the normalized direction at 0 after theta_{A0}
};

KobLift kobayashi_lift(const Point& Y, const NumericsParams& prm, Rng& rng) {
  KobLift best;
  std::normal_distribution<double> nd(0, 1.5);
  for (int branch = 0; branch < 2; ++branch) {
    auto build = [&](const Eigen::VectorXd& v, M2& A0, M2& Kt) {
      cplx s = 0.5 * (1 + std::tanh(v[0])) * (1 - 1e-12) * unit(v[1]);
      cplx fr(v[2], v[3]);
      M2 K;
      A0.setZero();
      if (branch == 0) {
        A0(0, 1) = s;
        K << Y[0], fr, -Y[2] / s, Y[1];
      } else {
        A0(1, 0) = s;
        K << Y[0], -Y[2] / s, fr, Y[1];
      }
      // I - A0 A0* and I - A0* A0 are diagonal here
      double c = 1 / std::sqrt(1 - std::norm(s));
      Kt = K;
      Kt.row(branch) *= c;
      Kt.col(1 - branch) *= c;
    };
    auto obj = [&](const Eigen::VectorXd& v) {
      M2 A0, Kt;
      build(v, A0, Kt);
      double f = Kt.squaredNorm(), d = std::abs(Kt.determinant());
      double o = std::sqrt(0.5 * (f + std::sqrt(std::max(0.0, f * f - 4 * d * d))));
      return std::isfinite(o) ? o : 1e300;
    };
    for (int st = 0; st < prm.lift_starts; ++st) {
      Eigen::VectorXd v0 = Eigen::VectorXd::Zero(4);
      if (st > 0)
        for (int k = 0; k < 4; ++k) v0[k] = nd(rng);
      MinResult r = nelder_mead(obj, v0, 0.5, 1e-13, 6000);
      r = nelder_mead(obj, r.x, 0.05, 1e-14, 6000);
      if (r.f < best.value) {
        best.value = r.f;
        build(r.x, best.A0, best.Kt);
      }
    }
  }
  return best;
}

// ---- polynomial disc search with bisection in tanh^{-1}(sigma) ----

struct PolyCandidate {
  double rho = 0;
  Eigen::MatrixXcd P;
  double umax = 1;
};

// Taylor coefficients 2..d of l -> D(l), from samples on a circle of radius 0.95
Eigen::MatrixXcd taylor_tail(const AnalyticDisc& D, int degree, int m) {
  const int N = 256, J = std::max(0, degree - 1);
  const double rs = 0.95;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(J, m);
  for (int k = 0; k < N; ++k) {
    cplx l = unit(2 * kPi * k / N);
    Eigen::RowVectorXcd v = D.eval_work(rs * l).transpose();
    for (int j = 0; j < J; ++j) T.row(j) += v * std::pow(std::conj(l), j + 2) / std::pow(rs, j + 2);
  }
  return T / N;
}

Eigen::VectorXd flatten(const Eigen::MatrixXcd& C) {
  Eigen::VectorXd x(2 * C.size());
  for (Eigen::Index j = 0; j < C.rows(); ++j)
    for (Eigen::Index c = 0; c < C.cols(); ++c) {
      x[2 * (j * C.cols() + c)] = C(j, c).real();
      x[2 * (j * C.cols() + c) + 1] = C(j, c).imag();
    }
  return x;
}

struct PolySeeds {
  const Work* wk = nullptr;
  int degree = 1;
  // a disc through z at 0 and w at sigma_d, rescaled to l -> D(l sigma_d/sigma)
  std::optional<Eigen::MatrixXcd> taylor;
  double sigma_d = 0;

  std::vector<Eigen::VectorXd> at(double sigma) const {
    const int J = std::max(0, degree - 1);
    std::vector<Eigen::VectorXd> seeds;
    if (taylor && sigma > sigma_d) {
      Eigen::MatrixXcd C = *taylor;
      for (int j = 0; j < J; ++j) C.row(j) *= std::pow(sigma_d / sigma, j + 2);
      seeds.push_back(flatten(C));
    }
    seeds.push_back(Eigen::VectorXd::Zero(2 * J * wk->m));
    if (!wk->lhat_gauge || J == 0) return seeds;
    // linear discs in L_m pushed through Lambda, one per relative sign of the roots
    cplx s0 = std::sqrt(wk->z[0]), s1 = std::sqrt(wk->w[0]);
    for (double sg : {1.0, -1.0}) {
      cplx dl = (sg * s1 - s0) / sigma;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * J * wk->m);
      x[0] = (dl * dl).real();
      x[1] = (dl * dl).imag();
      seeds.push_back(x);
    }
    return seeds;
  }
};

std::optional<PolyCandidate> feasible_at(const Work& wk, double rho, const NumericsParams& prm,
                                        const std::vector<cplx>& grid, const PolySeeds& ps, Eigen::VectorXd& warm) {
  double sigma = std::tanh(rho);
  int deg = std::max(1, prm.disc_degree);
  Minimax mm = interp_problem(wk, sigma, deg, grid);
  double target = 1 - prm.margin;
  std::vector<Eigen::VectorXd> seeds;
  if (warm.size() == mm.nvar()) seeds.push_back(warm);
  for (auto& s : ps.at(sigma)) seeds.push_back(s);
  if (static_cast<int>(seeds.size()) > std::max(1, prm.restarts)) seeds.resize(std::max(1, prm.restarts));
  double best = 2;
  Eigen::VectorXd bx;
  for (auto x : seeds) {
    double v = mm.solve(x, target);
    if (v < best) {
      best = v;
      bx = x;
    }
    if (best <= target) break;
  }
  if (bx.size() && best <= target) warm = bx;
  if (!(best <= target)) return std::nullopt;
  PolyCandidate c;
  c.rho = rho;
  c.P = interp_coeffs(wk, sigma, deg, mm.coeffs(bx));
  // finer boundary sampling
  double mx = 0;
  for (int k = 0; k < 4096; ++k) mx = std::max(mx, work_gauge(wk.lhat_gauge, horner(c.P, unit(2 * kPi * k / 4096))));
  if (!(mx <= 1 - prm.margin / 2)) return std::nullopt;
  c.umax = mx;
  return c;
}

// bisection in rho = tanh^{-1}(sigma); lo is known to be infeasible
std::optional<PolyCandidate> poly_search(const Work& wk, const NumericsParams& prm, double lo, const PolySeeds& ps) {
  std::vector<cplx> grid = circle(prm.boundary_grid);
  Eigen::VectorXd warm;
  std::optional<PolyCandidate> best;
  const double cap = std::atanh(0.999);
  double step = 0.01;
  double hi = ps.taylor ? std::max(lo, std::atanh(ps.sigma_d)) + step : lo + step;
  while (true) {
    hi = std::min(hi, cap);
    best = feasible_at(wk, hi, prm, grid, ps, warm);
    if (best || hi >= cap) break;
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  if (!best) return std::nullopt;
  while (hi - lo > prm.sigma_tol) {
    double mid = 0.5 * (lo + hi);
    auto c = feasible_at(wk, mid, prm, grid, ps, warm);
    if (c) {
      best = c;
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return best;
}

// ---- lower bound pieces ----

double slice_rho(cplx lam, const Point& X, const Point& Y, SliceFamily f) {
  return poincare(tetra_slice_function(lam, X, f), tetra_slice_function(lam, Y, f));
}

struct BaseBest {
  double value = -1;
  cplx lambda = 1;
  SliceFamily family = SliceFamily::G;
};

BaseBest base_search(const Point& X, const Point& Y, const NumericsParams& prm) {
  BaseBest b;
  const int N = std::max(8, prm.lambda_grid);
  for (SliceFamily f : {SliceFamily::G, SliceFamily::H}) {
    std::vector<double> v(N);
    for (int k = 0; k < N; ++k) v[k] = slice_rho(unit(2 * kPi * k / N), X, Y, f);
    for (int k = 0; k < N; ++k) {
      // refine every local maximum of the grid
      if (v[k] < v[(k + N - 1) % N] || v[k] < v[(k + 1) % N]) continue;
      double h = 2 * kPi / N, th = 2 * kPi * k / N;
      double t = golden_section([&](double s) { return -slice_rho(unit(s), X, Y, f); }, th - h, th, th + h,
                                prm.lambda_tol);
      double val = slice_rho(unit(t), X, Y, f);
      if (v[k] > val) {
        t = th;
        val = v[k];
      }
      if (val > b.value) {
        b.value = val;
        b.lambda = unit(t);
        b.family = f;
      }
    }
  }
  return b;
}

// one level: maximize rho(F_a(X), F_b(Y)) with rho(a, b) = c
struct LevelParams {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(3);
  SliceFamily family = SliceFamily::G;
};

cplx level_a(const Eigen::VectorXd& v) {
  double r = std::hypot(v[0], v[1]);
  return r > 0 ? std::tanh(r) * cplx(v[0], v[1]) / r : cplx(0);
}

void extend_chain(CaratheodoryWitness& wit, const Point& X, const Point& Y, double& value, const NumericsParams& prm,
                  Rng& rng) {
  cplx uX = wit.tetra_value(X), uY = wit.tetra_value(Y);
  value = poincare(uX, uY);
  std::normal_distribution<double> nd(0, 1.0);
  std::uniform_real_distribution<double> ud(0, 2 * kPi);
  std::optional<LevelParams> warm;
  for (int lev = 0; lev < prm.chain_levels; ++lev) {
    if (value <= 0) return;
    const double t = std::tanh(value);
    double best = value;
    LevelParams bp;
    // a wider scan before giving up on a level
    for (int attempt = 0; attempt < 2 && !(best > value + prm.chain_tol); ++attempt) {
      const int nscan = attempt ? 15000 : 1500;
      for (SliceFamily f : {SliceFamily::G, SliceFamily::H}) {
        auto obj = [&](const Eigen::VectorXd& v) {
          cplx a = level_a(v);
          if (!(std::abs(a) < 1)) return 1e300;
          cplx b = mob(-a, t * unit(v[2]));
          if (!(std::abs(b) < 1)) return 1e300;
          return -poincare(tetra_slice_function(a, X, f), tetra_slice_function(b, Y, f));
        };
        std::vector<Eigen::VectorXd> starts;
        if (warm && warm->family == f) starts.push_back(warm->v);
        // coarse scan; the landscape has several local maxima
        std::vector<std::pair<double, Eigen::VectorXd>> scan;
        // half uniform by area, half uniform in hyperbolic radius out to beyond the current value
        const double rmax = std::max(3.0, value + 1.5);
        for (int i = 0; i < nscan; ++i) {
          double rad = i % 2 ? std::atanh(std::sqrt(ud(rng) / (2 * kPi)) * 0.999) : rmax * ud(rng) / (2 * kPi);
          double th = ud(rng);
          Eigen::VectorXd v(3);
          v << rad * std::cos(th), rad * std::sin(th), ud(rng);
          scan.emplace_back(obj(v), v);
        }
        int keep = (std::max(2, prm.restarts) - 1) * (attempt ? 3 : 1);
        std::partial_sort(scan.begin(), scan.begin() + keep, scan.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
        for (int i = 0; i < keep; ++i) starts.push_back(scan[i].second);
        for (auto& s : starts) {
          MinResult r = nelder_mead(obj, s, 0.3, 1e-11, 3000);
          if (-r.f > best) {
            best = -r.f;
            bp.v = r.x;
            bp.family = f;
          }
        }
      }
    }
    if (!(best > value + prm.chain_tol)) return;
    warm = bp;
    // explicit link: lambda(x) = m_{-a}(k m_u(F(x))) sends F(X) -> a, F(Y) -> b
    ChainLink ln;
    ln.family = bp.family;
    ln.a = level_a(bp.v);
    ln.u = uX;
    cplx vp = mob(uX, uY);
    cplx bp_img = t * unit(bp.v[2]);
    ln.k = std::abs(vp) > 0 ? bp_img / vp : cplx(0);
    if (std::abs(ln.k) > 1) ln.k /= std::abs(ln.k);
    CaratheodoryWitness next = wit;
    next.chain.push_back(ln);
    cplx nX = next.tetra_value(X), nY = next.tetra_value(Y);
    double nv = poincare(nX, nY);
    if (!(nv > value + prm.chain_tol)) return;
    wit = std::move(next);
    uX = nX;
    uY = nY;
    value = nv;
  }
}

LowerBound tetra_lower(const Point& X, const Point& Y, CaratheodoryWitness wit, const NumericsParams& prm) {
  Rng rng(prm.seed);
  std::vector<TetraMobius> pres{TetraMobius{}};
  double res = 0;
  try {
    TetraMobius nz = tetra_normalizer(X, &res, prm.seed);
    pres.push_back(nz);
    std::uniform_real_distribution<double> ud(-0.05, 0.05);
    for (int i = 0; i < prm.tetra_perturbations; ++i) {
      TetraMobius p = nz;
      p.beta1 += cplx(ud(rng), ud(rng));
      p.beta2 += cplx(ud(rng), ud(rng));
      if (std::abs(p.beta1) < 1 && std::abs(p.beta2) < 1) pres.push_back(p);
    }
  } catch (const NormalizationFailure&) {
  }
  LowerBound out;
  out.value = -1;
  Point bX, bY;
  for (const TetraMobius& p : pres) {
    Point pX = tetra_mobius_apply(p, X), pY = tetra_mobius_apply(p, Y);
    if (!in_tetrablock(pX) || !in_tetrablock(pY)) continue;
    BaseBest b = base_search(pX, pY, prm);
    if (b.value > out.value + 1e-14) {
      out.value = b.value;
      wit.pre = p;
      wit.lambda = b.lambda;
      wit.family = b.family;
      bX = pX;
      bY = pY;
    }
  }
  if (out.value < 0) throw SearchFailure("caratheodory_lower: no admissible slice function");
  if (prm.use_chain) extend_chain(wit, bX, bY, out.value, prm, rng);
  out.value = poincare(wit.tetra_value(bX), wit.tetra_value(bY));
  out.levels = static_cast<int>(wit.chain.size());
  out.witness = std::move(wit);
  return out;
}

}  // namespace

cplx tetra_slice_function(cplx lambda, const Point& x, SliceFamily f) {
  if (x.size() != 3) throw DimensionError("tetra_slice_function: need 3 coordinates");
  cplx a = f == SliceFamily::G ? x[0] : x[1];
  cplx b = f == SliceFamily::G ? x[1] : x[0];
  cplx den = 1.0 - lambda * a;
  if (std::abs(den) < 1e-300) throw SingularityError("tetra_slice_function: vanishing denominator");
  return (b - lambda * x[2]) / den;
}

cplx CaratheodoryWitness::tetra_value(const Point& x) const {
  cplx v = tetra_slice_function(lambda, x, family);
  for (const ChainLink& l : chain) v = tetra_slice_function(mob(-l.a, l.k * mob(l.u, v)), x, l.family);
  return v;
}

cplx CaratheodoryWitness::operator()(const Point& z) const {
  switch (kind) {
    case DomainKind::UnitDisc:
      return mob(lambda, z[0]);
    case DomainKind::LieBall: {
      Point y = ball_frame ? apply_mobius(*ball_frame, z) : z;
      return (functional.array() * y.array()).sum();
    }
    case DomainKind::Tetrablock: {
      Point x = frame ? tetra_from_lhat3(frame->apply(lhat3_from_tetra(z))) : z;
      return tetra_value(tetra_mobius_apply(pre, x));
    }
    case DomainKind::LHat: {
      Point y = z.size() == 2 ? embed_q(z) : z;
      if (frame) y = frame->apply(y);
      return tetra_value(tetra_mobius_apply(pre, tetra_from_lhat3(y.head(3))));
    }
  }
  throw DomainError("CaratheodoryWitness: unknown domain");
}

LowerBound caratheodory_lower(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm) {
  check_pair(kind, z, w, "caratheodory_lower");
  CaratheodoryWitness wit;
  wit.kind = kind;
  wit.dim = static_cast<int>(z.size());
  LowerBound out;
  if (kind == DomainKind::UnitDisc || (kind == DomainKind::LHat && z.size() == 1) ||
      (kind == DomainKind::LieBall && z.size() == 1)) {
    wit.kind = DomainKind::UnitDisc;
    wit.lambda = z[0];
    out.value = poincare(z[0], w[0]);
    out.witness = wit;
    if (kind == DomainKind::LHat) {
      // LHat(1) is {|w1| < 1} as well
      out.witness.kind = DomainKind::UnitDisc;
    }
    return out;
  }
  if (kind == DomainKind::LieBall) {
    wit.ball_frame = lie_ball_to_origin(z);
    Point w0 = apply_mobius(*wit.ball_frame, w);
    Frame f = normal_frame(w0);
    // in the normal frame y = (a, +-i b, 0, ...) and y1 -+ i y2 = a + b = p
    Point y = apply_frame(f, w0);
    Point e = Point::Zero(z.size());
    e[0] = 1;
    e[1] = std::abs(y[0] - cplx(0, 1) * y[1]) >= std::abs(y[0] + cplx(0, 1) * y[1]) ? cplx(0, -1) : cplx(0, 1);
    wit.functional = f.eta * (f.A.transpose().cast<cplx>() * e);
    out.value = poincare(wit(z), wit(w));
    out.witness = wit;
    return out;
  }
  Work wk = make_work(kind, z, w);
  wit.frame = wk.map;
  return tetra_lower(tetra_from_lhat3(wk.z.head(3)), tetra_from_lhat3(wk.w.head(3)), wit, prm);
}

std::string to_string(DiscKind k) {
  switch (k) {
    case DiscKind::Constant:
      return "constant";
    case DiscKind::Polynomial:
      return "polynomial";
    case DiscKind::MatrixLift:
      return "matrix_lift";
  }
  return "?";
}

Point AnalyticDisc::eval_work(cplx lambda) const {
  switch (type) {
    case DiscKind::Constant:
      return coeffs.row(0).transpose();
    case DiscKind::Polynomial:
      return horner(coeffs, lambda);
    case DiscKind::MatrixLift: {
      Point y = Point::Zero(work_dim);
      y.head(3) = lhat3_from_tetra(pi_tetra(theta_inv(M0, r * lambda * K)));
      return y;
    }
  }
  throw DomainError("AnalyticDisc: unknown disc type");
}

Point AnalyticDisc::eval(cplx lambda) const {
  Point y = eval_work(lambda);
  if (type == DiscKind::Constant) return y;
  switch (kind) {
    case DomainKind::UnitDisc:
    case DomainKind::LieBall:
      if (ball_inv) return apply_mobius(*ball_inv, y);
      if (dim == 1) return Point::Constant(1, mob(-z[0], y[0]));
      return y;
    case DomainKind::Tetrablock:
      return tetra_from_lhat3(frame_inv ? frame_inv->apply(y) : y);
    case DomainKind::LHat: {
      if (frame_inv) y = frame_inv->apply(y);
      return dim == 2 ? project_pi(y) : y;
    }
  }
  throw DomainError("AnalyticDisc: unknown domain");
}

double domain_gauge(DomainKind kind, const Point& z) {
  switch (kind) {
    case DomainKind::UnitDisc:
      return std::abs(z[0]);
    case DomainKind::LieBall:
      return gauge_p(z);
    case DomainKind::LHat:
      return lhat_gauge(z);
    case DomainKind::Tetrablock:
      return tetra_gauge(z);
  }
  throw DomainError("domain_gauge: unknown domain");
}

double AnalyticDisc::boundary_max_gauge(int samples) const {
  double mx = 0;
  for (int k = 0; k < samples; ++k) mx = std::max(mx, domain_gauge(kind, eval(unit(2 * kPi * k / samples))));
  return mx;
}

UpperBound lempert_upper(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm,
                         double lower_hint) {
  check_pair(kind, z, w, "lempert_upper");
  UpperBound out;
  if (z == w) {
    out.disc.kind = kind;
    out.disc.type = DiscKind::Constant;
    out.disc.dim = static_cast<int>(z.size());
    out.disc.z = z;
    out.disc.w = w;
    out.disc.coeffs = z.transpose();
    out.boundary_max = domain_gauge(kind, z);
    return out;
  }
  if (kind == DomainKind::LHat && z.size() == 1) kind = DomainKind::UnitDisc;
  Work wk = make_work(kind, z, w);
  Rng rng(prm.seed ^ 0x5bd1e995u);

  auto finish = [&](AnalyticDisc d) {
    d.kind = kind;
    d.dim = wk.dim;
    d.work_dim = wk.m;
    d.z = z;
    d.w = w;
    if (wk.map) d.frame_inv = wk.map->inverse();
    if (wk.ball) d.ball_inv = wk.ball->inverse();
    return d;
  };

  std::vector<std::pair<double, AnalyticDisc>> cands;
  PolySeeds seeds;
  seeds.wk = &wk;
  seeds.degree = std::max(1, prm.disc_degree);
  if (!wk.lhat_gauge) {
    // linear disc l -> l w/sigma in the frame where z = 0
    double p = work_gauge(false, wk.w);
    auto linear = [&](double t) {
      AnalyticDisc d;
      d.type = DiscKind::Polynomial;
      d.coeffs = Eigen::MatrixXcd::Zero(2, wk.m);
      d.sigma = p / t;
      d.coeffs.row(1) = (wk.w / d.sigma).transpose();
      return finish(d);
    };
    // the margin has to hold for the disc as returned, and the ball automorphism does not keep the gauge
    auto fits = [&](double t) { return linear(t).boundary_max_gauge(4096) <= 1 - prm.margin; };
    double lo_t = p, hi_t = 1 - prm.margin;
    if (p < hi_t && !fits(hi_t)) {
      for (int it = 0; it < 60 && hi_t - lo_t > 1e-15; ++it) {
        double mid = (lo_t + hi_t) / 2;
        (fits(mid) ? lo_t : hi_t) = mid;
      }
      hi_t = lo_t;
    }
    if (p < hi_t) {
      AnalyticDisc d = linear(hi_t);
      cands.emplace_back(std::atanh(d.sigma), d);
    }
  } else if (prm.use_matrix_lift || prm.seed_from_lift) {
    if (auto d = lift_disc(wk, prm, rng)) {
      AnalyticDisc full = finish(*d);
      if (prm.use_matrix_lift) {
        out.lift_value = std::atanh(d->sigma);
        cands.emplace_back(out.lift_value, full);
      }
      if (prm.seed_from_lift) {
        seeds.taylor = taylor_tail(full, seeds.degree, wk.m);
        seeds.sigma_d = d->sigma;
      }
    }
  }
  double best_other = cands.empty() ? std::numeric_limits<double>::infinity() : cands.front().first;
  if (prm.use_polynomial && !(best_other - lower_hint <= prm.sigma_tol)) {
    double lo = std::max(0.0, lower_hint - prm.sigma_tol);
    if (auto pc = poly_search(wk, prm, lo, seeds)) {
      AnalyticDisc d;
      d.type = DiscKind::Polynomial;
      d.coeffs = pc->P;
      d.sigma = std::tanh(pc->rho);
      out.poly_value = pc->rho;
      // re-check on the returned disc; the working frame is only an automorphism away
      AnalyticDisc full = finish(d);
      if (full.boundary_max_gauge(4096) <= 1 - prm.margin / 2) cands.emplace_back(pc->rho, full);
    }
  }
  if (cands.empty()) throw SearchFailure("lempert_upper: no admissible disc found");
  auto it = std::min_element(cands.begin(), cands.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  out.value = it->first;
  out.disc = it->second;
  out.sigma = out.disc.sigma;
  out.boundary_max = work_boundary_max(out.disc, 4096);
  return out;
}

double kobayashi_upper_origin(DomainKind kind, const Point& X, const NumericsParams& prm) {
  if (X.size() == 0) throw DimensionError("kobayashi_upper_origin: empty vector");
  const double nx = X.norm();
  if (nx == 0) return 0;
  // homogeneous of degree one; work with the unit vector
  Point V = X / nx;
  bool lhat = true;
  switch (kind) {
    case DomainKind::UnitDisc:
      return nx * std::abs(V[0]) / (1 - prm.margin);
    case DomainKind::LieBall:
      return nx * gauge_p(V) / (1 - prm.margin);
    case DomainKind::Tetrablock: {
      if (X.size() != 3) throw DimensionError("kobayashi_upper_origin: tetrablock needs 3");
      Point Y(3);
      Y << V[2], (V[0] + V[1]) / 2.0, (V[0] - V[1]) / cplx(0, 2);
      V = Y;
      break;
    }
    case DomainKind::LHat:
      if (X.size() == 1) return nx * std::abs(V[0]) / (1 - prm.margin);
      if (X.size() == 2) V = embed_q(V);
      break;
  }
  const int m = static_cast<int>(V.size());
  const int deg = std::max(1, prm.disc_degree), J = deg - 1;
  std::vector<cplx> grid = circle(prm.boundary_grid);
  const double target = 1 - prm.margin;

  // f(l) = t l V + sum_{j>=2} c_j l^j
  Minimax mm;
  mm.lhat = lhat;
  mm.base.resize(grid.size(), m);
  mm.B.resize(grid.size(), J);
  for (size_t k = 0; k < grid.size(); ++k) {
    mm.base.row(k) = (grid[k] * V).transpose();
    cplx lp = grid[k];
    for (int j = 0; j < J; ++j) {
      lp *= grid[k];
      mm.B(k, j) = lp;
    }
  }
  auto certified = [&](const Eigen::VectorXd& x, double t) {
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(deg + 1, m);
    P.row(1) = (t * V).transpose();
    if (J > 0) P.bottomRows(J) = mm.coeffs(x);
    for (int k = 0; k < 4096; ++k)
      if (!(work_gauge(lhat, horner(P, unit(2 * kPi * k / 4096))) <= 1 - prm.margin / 2)) return false;
    return true;
  };

  // the linear disc l -> t l V; u is not circled (w1 turns with l, q(w') with l^2)
  auto lin_max = [&](double t) {
    double mx = 0;
    for (cplx l : grid) mx = std::max(mx, work_gauge(lhat, t * l * V));
    return mx;
  };
  // explicit rational disc l -> pi(theta_{A0}^{-1}(r l Kt/|Kt|)), r < 1, which stays in the tetrablock
  double lift_bound = std::numeric_limits<double>::infinity();
  if (prm.use_matrix_lift) {
    Point V3 = V.size() > 3 ? Point(apply_frame(partial_normal_frame(V, 1).frame, V).head(3)) : V;
    Point Y(3);
    Y << V3[1] + cplx(0, 1) * V3[2], V3[1] - cplx(0, 1) * V3[2], V3[0];
    Rng rng(prm.seed);
    KobLift kl = kobayashi_lift(Y, prm, rng);
    const double r = 1 - 1e-10;
    if (std::isfinite(kl.value) && kl.value > 0) {
      M2 D = kl.Kt * (r / kl.value);
      bool inside = true;
      for (int k = 0; k < 512 && inside; ++k) {
        Point y = lhat3_from_tetra(pi_tetra(theta_inv(kl.A0, unit(2 * kPi * k / 512) * D)));
        inside = lhat_gauge(y) < 1;
      }
      if (inside) lift_bound = kl.value / r;
    }
    // sup over lambda of |d/de G_lambda(eY)| and the same for H: a lower bound for the metric
    double slice = std::max(std::abs(Y[0]), std::abs(Y[1])) + std::abs(Y[2]);
    if (lift_bound - slice <= prm.sigma_tol * slice) return nx * lift_bound;
  }

  double lo = 0, hi = 1;
  while (lin_max(hi) < target) hi *= 2;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (lin_max(mid) < target ? lo : hi) = mid;
  }
  double best = lo;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * J * m);
  double t = lo;
  mm.solve_scale(x, t, target);
  // the solution sits on the constraint up to the penalty slack; back off until certified
  for (double eps : {0.0, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
    double tt = t * (1 - eps);
    if (tt <= best) break;
    if (certified(x, tt)) {
      best = tt;
      break;
    }
  }
  return nx * std::min(1 / best, lift_bound);
}

DistanceReport distance_report(DomainKind kind, const Point& z, const Point& w, const NumericsParams& prm) {
  DistanceReport r;
  r.z = z;
  r.w = w;
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.lower = caratheodory_lower(kind, z, w, prm);
    r.upper = lempert_upper(kind, z, w, prm, r.lower.value);
    r.c_lower = r.lower.value;
    r.l_upper = r.upper.value;
    r.gap = r.l_upper - r.c_lower;
    r.sigma = r.upper.sigma;
    r.witness_lambda = r.lower.witness.lambda;
    r.chain_levels = r.lower.levels;
    r.disc_family = to_string(r.upper.disc.type);
    r.poly_upper = r.upper.poly_value;
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<DistanceReport> lempert_gap_report(DomainKind kind, const std::vector<std::pair<Point, Point>>& pairs,
                                               const NumericsParams& prm, int jobs) {
  std::vector<DistanceReport> out(pairs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < pairs.size(); i = next++) {
      NumericsParams p = prm;
      p.seed = prm.seed + static_cast<unsigned>(i);
      out[i] = distance_report(kind, pairs[i].first, pairs[i].second, p);
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));
  if (jobs == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

GapSummary summarize(const std::vector<DistanceReport>& reports, double tolerance) {
  GapSummary s;
  s.pairs = static_cast<int>(reports.size());
  std::vector<double> gaps;
  for (const auto& r : reports) {
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    gaps.push_back(r.gap);
    s.max_gap = std::max(s.max_gap, r.gap);
    if (r.gap <= tolerance) ++s.within;
    if (r.c_lower > r.l_upper + 1e-9) s.sound = false;
  }
  if (!gaps.empty()) {
    std::sort(gaps.begin(), gaps.end());
    size_t h = gaps.size() / 2;
    s.median_gap = gaps.size() % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
  }
  return s;
}

}  // namespace lempertlab
