#include "lempertlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "lempertlab/extremal.hpp"
#include "lempertlab/metrics.hpp"
#include "lempertlab/sampling.hpp"

namespace lempertlab {

namespace {

using Clock = std::chrono::steady_clock;

int count(const AcceptanceOptions& o, int full) { return std::max(1, static_cast<int>(std::lround(full * o.scale))); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

CriterionResult finish(CriterionResult r, const Timer& t, bool ok, const std::string& detail) {
  r.seconds = t.seconds();
  r.detail = detail;
  r.pass = ok && r.seconds < r.budget;
  if (ok && !(r.seconds < r.budget)) r.detail += "; over the time budget";
  return r;
}

void note(const AcceptanceOptions& o, const std::string& s) {
  if (o.log) *o.log << "  " << s << std::endl;
}

Point scaled_gaussian(int n, Rng& rng, double lo, double hi) {
  Point g = random_gaussian(n, rng);
  std::uniform_real_distribution<double> u(lo, hi);
  return g * (u(rng) / g.norm());
}

}  // namespace

CriterionResult criterion_closed_forms(const AcceptanceOptions& o) {
  CriterionResult r{1, "closed-form consistency", false, "", 0, 10};
  Timer t;
  Rng rng(o.seed);
  double form_gap = 0, tetra_gap = 0;
  const int N = count(o, 10000);
  for (int n : {3, 4, 5, 6}) {
    for (int i = 0; i < N; ++i) {
      Point z = random_lhat(n, rng);
      LhatOriginForms f = carath_origin_lhat_forms(z);
      form_gap = std::max(form_gap, std::abs(f.printed - f.eta_form));
      if (n == 3) {
        double tt = std::tanh(carath_origin_tetra(tetra_from_lhat3(z)));
        tetra_gap = std::max({tetra_gap, std::abs(f.printed - tt), std::abs(f.eta_form - tt)});
      }
    }
  }
  bool ok = form_gap <= 1e-10 && tetra_gap <= 1e-12;
  return finish(r, t, ok, "printed vs eta form " + sci(form_gap) + ", n=3 vs tetrablock " + sci(tetra_gap));
}

CriterionResult criterion_membership(const AcceptanceOptions& o) {
  CriterionResult r{2, "membership equivalences", false, "", 0, 30};
  Timer t;
  Rng rng(o.seed + 1);
  const int N = count(o, 100000);
  int bad3 = 0, bad4 = 0, inside3 = 0, inside4 = 0;
  for (int i = 0; i < N; ++i) {
    int n = 2 + i % 5;
    Point z = scaled_gaussian(n, rng, 0.2, 1.3);
    bool eq3 = in_lie_ball(z);
    inside3 += eq3;
    if (eq3 != (gauge_p(z) < 1)) ++bad3;
    Point w = random_polydisc(n, rng, 1.1);
    bool eq4 = in_lhat(w);
    inside4 += eq4;
    if (eq4 != in_lie_ball(lambda_lift(w))) ++bad4;
  }
  // the definition through 1 - l1 x1 - l2 x2 + l1 l2 x3 reduces, for fixed l1, to
  // |x2 - l1 x3| < |1 - l1 x1|; a circle grid can only miss violations
  const int M = count(o, 1000), G = 720;
  int bad_prop = 0, inside_prop = 0;
  for (int i = 0; i < M; ++i) {
    Point x = random_polydisc(3, rng, 1.0);
    bool prop = in_tetrablock(x);
    inside_prop += prop;
    bool grid_ok = std::abs(x[0]) < 1;
    for (int k = 0; k < G && grid_ok; ++k) {
      cplx l = std::polar(1.0, 2 * M_PI * k / G);
      if (!(std::abs(x[1] - l * x[2]) < std::abs(1.0 - l * x[0]))) grid_ok = false;
    }
    if (prop && !grid_ok) ++bad_prop;
  }
  bool ok = bad3 == 0 && bad4 == 0 && bad_prop == 0;
  std::ostringstream d;
  d << "Lie ball inequalities vs gauge: mismatches " << bad3 << " (" << inside3 << " inside), LHat inequalities vs lift: mismatches " << bad4 << " ("
    << inside4 << " inside), tetrablock one-sided violations " << bad_prop << " (" << inside_prop << " inside)";
  return finish(r, t, ok, d.str());
}

CriterionResult criterion_automorphisms(const AcceptanceOptions& o) {
  CriterionResult r{3, "automorphism suite", false, "", 0, 60};
  Timer t;
  Rng rng(o.seed + 2);
  const int N = count(o, 1000);
  double assoc = 0, hom = 0, inv = 0, jdef = 0, ident = 0, kap = 0, branch = 0, round = 0;
  int member_flips = 0;
  for (int i = 0; i < N; ++i) {
    int n = 2 + i % 4;
    GroupElement g = random_group_element(n, rng), h = random_group_element(n, rng), k = random_group_element(n, rng);
    assoc = std::max(assoc, (((g * h) * k).M - (g * (h * k)).M).cwiseAbs().maxCoeff() / (1 + g.M.norm() * h.M.norm() * k.M.norm()));
    jdef = std::max({jdef, (g * h).j_defect() / (1 + (g * h).M.squaredNorm()), g.inverse().j_defect() / (1 + g.M.squaredNorm())});
    Point z = random_lie_ball(n, rng);
    hom = std::max(hom, (apply_mobius(g * h, z) - apply_mobius(g, apply_mobius(h, z))).cwiseAbs().maxCoeff());
    inv = std::max(inv, (apply_mobius(g.inverse(), apply_mobius(g, z)) - z).cwiseAbs().maxCoeff());
    ident = std::max(ident, (apply_mobius(GroupElement::identity(n), z) - z).cwiseAbs().maxCoeff());
    Point z0 = Point::Zero(n + 1);
    z0.tail(n) = z;
    Point img = apply_mobius(kappa_lift(g), z0);
    kap = std::max({kap, std::abs(img[0]), (img.tail(n) - apply_mobius(g, z)).cwiseAbs().maxCoeff()});
    LhatAutomorphism phi = descend(g);
    Point w = random_lhat(n + 1, rng);
    branch = std::max(branch, (phi.apply(w, 1) - phi.apply(w, -1)).cwiseAbs().maxCoeff());
    Point x = random_tetra(rng);
    Point y = random_lhat(3, rng);
    round = std::max({round, (tetra_from_lhat3(lhat3_from_tetra(x)) - x).cwiseAbs().maxCoeff(),
                      (lhat3_from_tetra(tetra_from_lhat3(y)) - y).cwiseAbs().maxCoeff()});
    Point c = random_polydisc(3, rng, 1.0);
    if (in_lhat(c) != in_tetrablock(tetra_from_lhat3(c))) ++member_flips;
  }
  bool ok = assoc <= 1e-12 && jdef <= 1e-10 && hom <= 1e-10 && inv <= 1e-10 && ident <= 1e-12 && kap <= 1e-10 &&
            branch <= 1e-10 && round <= 1e-12 && member_flips == 0;
  std::ostringstream d;
  d << "assoc " << sci(assoc) << ", J-defect " << sci(jdef) << ", Psi_gh " << sci(hom) << ", inverse " << sci(inv)
    << ", Psi_id " << sci(ident) << ", kappa " << sci(kap) << ", branch " << sci(branch) << ", tetra round trip "
    << sci(round) << ", membership flips " << member_flips;
  return finish(r, t, ok, d.str());
}

CriterionResult criterion_origin_sandwich(const AcceptanceOptions& o) {
  CriterionResult r{4, "origin sandwich", false, "", 0, 300};
  Timer t;
  Rng rng(o.seed + 3);
  const int N = count(o, 100);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < N; ++i) pairs.emplace_back(Point::Zero(4), random_lhat(4, rng));
  NumericsParams prm;
  prm.seed = o.seed;
  auto reps = lempert_gap_report(DomainKind::LHat, pairs, prm, o.jobs);
  int bad_low = 0, bad_up = 0, failed = 0;
  double worst_low = 0, worst_up = 0, worst_gap = 0;
  for (const auto& rep : reps) {
    if (!rep.ok) {
      ++failed;
      note(o, "pair failed: " + rep.error);
      continue;
    }
    double cf = carath_origin_lhat(rep.w);
    worst_low = std::max(worst_low, cf - rep.c_lower);
    worst_up = std::max(worst_up, rep.l_upper - cf);
    worst_gap = std::max(worst_gap, rep.gap);
    bad_low += rep.c_lower < cf - 1e-4;
    bad_up += rep.l_upper > cf + 1e-3;
  }
  bool ok = failed == 0 && bad_low == 0 && bad_up == 0;
  std::ostringstream d;
  d << N << " pairs: closed form - c_lower <= " << sci(worst_low) << ", l_upper - closed form <= " << sci(worst_up)
    << ", max gap " << sci(worst_gap) << ", failures " << failed;
  return finish(r, t, ok, d.str());
}

CriterionResult criterion_general_gap(const AcceptanceOptions& o) {
  CriterionResult r{5, "general-pair gap", false, "", 0, 900};
  Timer t;
  Rng rng(o.seed + 4);
  const int N = count(o, 100);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < N; ++i) {
    Point z = random_lhat(4, rng);
    pairs.emplace_back(z, random_lhat(4, rng));
  }
  NumericsParams prm;
  prm.seed = o.seed;
  auto reps = lempert_gap_report(DomainKind::LHat, pairs, prm, o.jobs);
  GapSummary s = summarize(reps, 1e-2);
  bool main_ok = s.within * 100 >= 95 * N && s.sound;
  for (const auto& rep : reps)
    if (!rep.ok) note(o, "pair failed: " + rep.error);

  // residual gap of the polynomial family alone, degree 4 against 8, on the first pairs
  const int M = std::min(N, 10);
  int certified4 = 0, certified8 = 0, worse = 0, better = 0;
  double sum4 = 0, sum8 = 0;
  for (int i = 0; i < M; ++i) {
    if (!reps[i].ok) continue;
    double g[2];
    for (int k = 0; k < 2; ++k) {
      NumericsParams pp = prm;
      pp.seed = o.seed + i;
      pp.use_matrix_lift = false;
      pp.disc_degree = k == 0 ? 4 : 8;
      try {
        g[k] = lempert_upper(DomainKind::LHat, pairs[i].first, pairs[i].second, pp, reps[i].c_lower).value -
               reps[i].c_lower;
      } catch (const SearchFailure&) {
        g[k] = std::numeric_limits<double>::infinity();
      }
    }
    note(o, "pair " + std::to_string(i) + ": polynomial gap deg 4 " + sci(g[0]) + ", deg 8 " + sci(g[1]));
    certified4 += std::isfinite(g[0]);
    certified8 += std::isfinite(g[1]);
    if (std::isfinite(g[0])) sum4 += g[0];
    if (std::isfinite(g[1])) sum8 += g[1];
    if (g[1] > g[0] + 1e-9) ++worse;
    if (g[1] < g[0] - 1e-9) ++better;
  }
  bool shrink_ok = worse == 0 && better > 0;
  std::ostringstream d;
  d << N << " pairs: gap <= 1e-2 on " << s.within << ", max gap " << sci(s.max_gap) << ", median " << sci(s.median_gap)
    << ", failures " << s.failures << ", sound " << (s.sound ? "yes" : "no") << "; polynomial discs on " << M
    << " pairs: certified " << certified4 << " -> " << certified8 << ", shrank on " << better << ", grew on " << worse;
  return finish(r, t, main_ok && shrink_ok, d.str());
}

CriterionResult criterion_kobayashi(const AcceptanceOptions& o) {
  CriterionResult r{6, "Kobayashi metric", false, "", 0, 180};
  Timer t;
  Rng rng(o.seed + 5);
  const int N = count(o, 50);
  double worst = 0;
  NumericsParams prm;
  for (int i = 0; i < N; ++i) {
    int n = 3 + i % 3;
    Point X = random_gaussian(n, rng);
    double up = kobayashi_upper_origin(DomainKind::LHat, X, prm);
    worst = std::max(worst, std::abs(up - kobayashi_origin_lhat(X)));
  }
  const int M = count(o, 10000);
  double expr = 0;
  for (int i = 0; i < M; ++i) {
    Point X = random_gaussian(3, rng);
    expr = std::max(expr, std::abs(kobayashi_origin_lhat(X) - kobayashi_origin_lhat3_max(X)));
  }
  bool ok = worst <= 1e-3 && expr <= 1e-12;
  return finish(r, t, ok,
                std::to_string(N) + " directions: max |upper - closed form| " + sci(worst) + "; n=3 expressions " + sci(expr));
}

CriterionResult criterion_normalization(const AcceptanceOptions& o) {
  CriterionResult r{7, "normalization", false, "", 0, 300};
  Timer t;
  Rng rng(o.seed + 6);
  const int N = count(o, 200);
  double tail_z = 0, tail_w = 0, inv = 0;
  int failed = 0;
  NumericsParams prm;
  prm.seed = o.seed;
  for (int i = 0; i < N; ++i) {
    Point z = random_lhat(5, rng), w = random_lhat(5, rng);
    try {
      NormalizedPair np = normalize_pair(z, w);
      tail_z = std::max({tail_z, np.z.tail(4).cwiseAbs().maxCoeff(), std::abs(np.z[0].imag())});
      tail_w = std::max(tail_w, np.w.tail(2).cwiseAbs().maxCoeff());
      double before = caratheodory_lower(DomainKind::LHat, z, w, prm).value;
      double after = caratheodory_lower(DomainKind::LHat, np.z, np.w, prm).value;
      inv = std::max(inv, std::abs(before - after));
    } catch (const std::exception& e) {
      ++failed;
      note(o, std::string("pair failed: ") + e.what());
    }
  }
  bool ok = failed == 0 && tail_z < 1e-8 && tail_w < 1e-8 && inv <= 1e-6;
  std::ostringstream d;
  d << N << " pairs: first point tail " << sci(tail_z) << ", second point coords 4..5 " << sci(tail_w)
    << ", c_lower change " << sci(inv) << ", failures " << failed;
  return finish(r, t, ok, d.str());
}

std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> all_criteria() {
  return {criterion_closed_forms,    criterion_membership, criterion_automorphisms, criterion_origin_sandwich,
          criterion_general_gap,     criterion_kobayashi,  criterion_normalization};
}

std::string format_result(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.1f s / %.0f s)", r.seconds, r.budget);
  return "criterion " + std::to_string(r.id) + ": " + (r.pass ? "PASS" : "FAIL") + "  " + r.name + "  " + r.detail +
         "  " + buf;
}

}  // namespace lempertlab
