#include "lempertlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lempertlab/acceptance.hpp"
#include "lempertlab/extremal.hpp"
#include "lempertlab/metrics.hpp"
#include "lempertlab/sampling.hpp"
#include "lempertlab/serialize.hpp"

namespace lempertlab {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(12) << v;
  return o.str();
}

DomainKind parse_domain(const std::string& s) {
  try {
    return domain_from_string(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// "0" stands for the origin, with the dimension of the other point
Point parse_arg_point(const std::string& s, Eigen::Index dim_hint = -1) {
  if (trim(s) == "0") {
    if (dim_hint <= 0) throw UsageError("'0' needs a second point to fix the dimension");
    return Point::Zero(dim_hint);
  }
  try {
    return parse_point(s);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

void check_length(DomainKind k, const Point& z) {
  if (k == DomainKind::Tetrablock && z.size() != 3) throw UsageError("tetrablock points have 3 coordinates");
  if (k == DomainKind::UnitDisc && z.size() != 1) throw UsageError("disc points have 1 coordinate");
}

unsigned env_seed(unsigned fallback) {
  const char* s = std::getenv("LEMPERTLAB_SEED");
  if (!s || !*s) return fallback;
  try {
    return static_cast<unsigned>(std::stoul(s));
  } catch (const std::exception&) {
    throw UsageError("LEMPERTLAB_SEED is not an integer");
  }
}

// flag values; only those given on the command line override the config
struct Flags {
  unsigned seed = 0;
  int n = 0, samples = 0, degree = 0, grid = 0, jobs = 0;
  double margin = 0, tol = 0;
  std::string out, format, config;
  CLI::Option *o_seed = nullptr, *o_n = nullptr, *o_samples = nullptr, *o_degree = nullptr, *o_grid = nullptr,
              *o_jobs = nullptr, *o_margin = nullptr, *o_tol = nullptr, *o_out = nullptr, *o_format = nullptr;

  void add(CLI::App* c, bool batch) {
    o_seed = c->add_option("--seed", seed, "random seed (default: LEMPERTLAB_SEED, else 7)");
    o_degree = c->add_option("--degree", degree, "polynomial disc degree");
    o_grid = c->add_option("--grid", grid, "boundary samples");
    o_margin = c->add_option("--margin", margin, "boundary margin");
    c->add_option("--config", config, "key=value config file; flags win");
    if (!batch) return;
    o_n = c->add_option("--n", n, "dimension");
    o_samples = c->add_option("--samples", samples, "number of pairs");
    o_jobs = c->add_option("--jobs", jobs, "worker threads");
    o_tol = c->add_option("--tol", tol, "gap tolerance");
    o_out = c->add_option("--out", out, "output file");
    o_format = c->add_option("--format", format, "json or csv");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    cfg.seed = env_seed(cfg.seed);
    if (!config.empty()) apply_config(cfg, read_config_file(config));
    if (o_seed && o_seed->count()) cfg.seed = seed;
    if (o_n && o_n->count()) cfg.n = n;
    if (o_samples && o_samples->count()) cfg.samples = samples;
    if (o_degree && o_degree->count()) cfg.disc_degree = degree;
    if (o_grid && o_grid->count()) cfg.boundary_grid = grid;
    if (o_margin && o_margin->count()) cfg.margin = margin;
    if (o_tol && o_tol->count()) cfg.tolerance = tol;
    if (o_out && o_out->count()) cfg.output = out;
    if (o_format && o_format->count()) cfg.format = format;
    if (o_jobs && o_jobs->count()) cfg.jobs = jobs;
    cfg.validate();
    return cfg;
  }
};

NumericsParams numerics(const RunConfig& cfg) {
  NumericsParams p;
  p.disc_degree = cfg.disc_degree;
  p.boundary_grid = cfg.boundary_grid;
  p.margin = cfg.margin;
  p.seed = cfg.seed;
  return p;
}

// tanh^{-1} closed form at the origin, when there is one
std::optional<double> closed_form_origin(DomainKind k, const Point& w) {
  switch (k) {
    case DomainKind::LHat:
      if (w.size() == 1) return std::atanh(std::abs(w[0]));
      return carath_origin_lhat(w);
    case DomainKind::Tetrablock:
      return carath_origin_tetra(w);
    case DomainKind::LieBall:
      return carath_origin_lieball(w);
    case DomainKind::UnitDisc:
      return std::atanh(std::abs(w[0]));
  }
  return std::nullopt;
}

int cmd_member(const std::string& dom, const std::string& pt, std::ostream& out) {
  DomainKind k = parse_domain(dom);
  Point z = parse_arg_point(pt);
  check_length(k, z);
  bool in = in_domain(k, z);
  out << (in ? "member" : "non-member") << "\n";
  switch (k) {
    case DomainKind::LieBall: {
      double n2 = z.squaredNorm(), q = std::abs(symmetric_square(z));
      out << "|z|^2 = " << fmt(n2) << "\n2|z|^2 = " << fmt(2 * n2) << "  vs  1 + |<z,conj z>|^2 = " << fmt(1 + q * q)
          << "\np(z) = " << fmt(gauge_p(z)) << "\n";
      break;
    }
    case DomainKind::LHat: {
      Point t = z.tail(z.size() - 1);
      double s = std::abs(z[0]) + t.squaredNorm();
      double q = std::abs(z[0] + symmetric_square(t));
      out << "|z1| + |z'|^2 = " << fmt(s) << "\n2(|z1| + |z'|^2) = " << fmt(2 * s)
          << "  vs  1 + |z1 + <z',conj z'>|^2 = " << fmt(1 + q * q) << "\nu(z) = " << fmt(lhat_gauge(z)) << "\n";
      break;
    }
    case DomainKind::Tetrablock: {
      double l = std::norm(z[0]) + std::norm(z[1]) + 2 * std::abs(z[0] * z[1] - z[2]);
      out << "|x1|^2 + |x2|^2 + 2|x1 x2 - x3| = " << fmt(l) << "  vs  1 + |x3|^2 = " << fmt(1 + std::norm(z[2]))
          << "\n|x3| = " << fmt(std::abs(z[2])) << "\n";
      break;
    }
    case DomainKind::UnitDisc:
      out << "|z| = " << fmt(std::abs(z[0])) << "\n";
      break;
  }
  return in ? kExitOk : kExitNotMember;
}

int cmd_dist(const std::string& dom, const std::string& zs, const std::string& ws, const RunConfig& cfg, bool as_json,
             std::ostream& out) {
  DomainKind k = parse_domain(dom);
  Point w = parse_arg_point(ws);
  Point z = parse_arg_point(zs, w.size());
  if (trim(ws) == "0") w = Point::Zero(z.size());
  if (z.size() != w.size()) throw UsageError("points have different lengths");
  check_length(k, z);
  if (!in_domain(k, z) || !in_domain(k, w)) {
    out << "non-member\n";
    return kExitNotMember;
  }
  DistanceReport r = distance_report(k, z, w, numerics(cfg));
  if (as_json) {
    out << to_json(r).dump(2) << "\n";
  } else if (r.ok) {
    out << "c_lower = " << fmt(r.c_lower) << "\nl_upper = " << fmt(r.l_upper) << "\ngap = " << fmt(r.gap)
        << "\nsigma = " << fmt(r.sigma) << "\ndisc = " << r.disc_family << "\nchain levels = " << r.chain_levels
        << "\n";
  }
  if (!r.ok) {
    out << "search failed: " << r.error << "\n";
    return kExitCheckFailed;
  }
  if (z.norm() == 0) {
    if (auto cf = closed_form_origin(k, w)) {
      out << "exact = " << fmt(*cf) << "\nc_lower - exact = " << fmt(r.c_lower - *cf)
          << "\nl_upper - exact = " << fmt(r.l_upper - *cf) << "\n";
    }
  }
  return kExitOk;
}

int cmd_kappa(const std::string& dom, const std::string& xs, const RunConfig& cfg, std::ostream& out) {
  DomainKind k = parse_domain(dom);
  Point X = parse_arg_point(xs);
  check_length(k, X);
  double up = kobayashi_upper_origin(k, X, numerics(cfg));
  double exact = 0;
  switch (k) {
    case DomainKind::LHat:
      exact = X.size() == 1 ? std::abs(X[0]) : kobayashi_origin_lhat(X);
      break;
    case DomainKind::Tetrablock:
      exact = kobayashi_origin_tetra(X);
      break;
    case DomainKind::LieBall:
      exact = gauge_p(X);
      break;
    case DomainKind::UnitDisc:
      exact = std::abs(X[0]);
      break;
  }
  out << "kappa_upper(0; X) = " << fmt(up) << "\nexact = " << fmt(exact) << "\nupper - exact = " << fmt(up - exact)
      << "\n";
  return kExitOk;
}

int cmd_normalize(const std::string& dom, const std::string& zs, const std::string& ws, std::ostream& out) {
  DomainKind k = parse_domain(dom);
  Point w2 = ws.empty() || trim(ws) == "0" ? Point() : parse_arg_point(ws);
  Point z = parse_arg_point(zs, w2.size());
  check_length(k, z);
  if (k == DomainKind::Tetrablock) {
    if (!in_tetrablock(z)) {
      out << "non-member\n";
      return kExitNotMember;
    }
    if (!ws.empty()) throw UsageError("normalize: pairs are supported for lhat");
    double res = 0;
    TetraMobius m = tetra_normalizer(z, &res);
    json j = {{"normal_form", point_to_json(tetra_mobius_apply(m, z))}, {"map", to_json(m)}, {"residual", res}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  if (k != DomainKind::LHat) throw UsageError("normalize: domain must be lhat or tetra");
  if (z.size() < 3) throw UsageError("normalize: lhat points need n >= 3");
  if (!in_lhat(z)) {
    out << "non-member\n";
    return kExitNotMember;
  }
  json j;
  if (ws.empty()) {
    NormalizedPoint np = normalize_point_lhat(z);
    j = {{"normal_form", point_to_json(np.map.apply(z))}, {"rho", np.rho}, {"map", to_json(np.map)}};
  } else {
    Point w = trim(ws) == "0" ? Point(Point::Zero(z.size())) : w2;
    if (w.size() != z.size()) throw UsageError("points have different lengths");
    if (!in_lhat(w)) {
      out << "non-member\n";
      return kExitNotMember;
    }
    NormalizedPair np = normalize_pair(z, w);
    j = {{"normal_form", point_to_json(np.z)},
         {"second", point_to_json(np.w)},
         {"rho", np.rho},
         {"map", to_json(np.map)}};
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& dom, const RunConfig& cfg, bool origin, bool identical, bool timing,
               std::ostream& out) {
  DomainKind k = parse_domain(dom);
  if (k == DomainKind::Tetrablock && cfg.n != 3) throw UsageError("verify-lempert: tetrablock needs --n 3");
  int n = k == DomainKind::UnitDisc ? 1 : cfg.n;
  Rng rng(cfg.seed);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < cfg.samples; ++i) {
    Point w = random_point(k, n, rng);
    Point z = origin ? Point::Zero(n) : (identical ? w : random_point(k, n, rng));
    pairs.emplace_back(z, w);
  }
  auto reps = lempert_gap_report(k, pairs, numerics(cfg), cfg.jobs);
  GapSummary s = summarize(reps, cfg.tolerance);

  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg.output);
    if (cfg.format == "csv") {
      write_csv(f, reps, timing);
    } else {
      json arr = json::array();
      for (const auto& r : reps) arr.push_back(to_json(r, timing));
      f << json{{"summary", to_json(s)}, {"reports", arr}}.dump(2) << "\n";
    }
  }
  out << "pairs " << s.pairs << "  failures " << s.failures << "  max gap " << fmt(s.max_gap) << "  median gap "
      << fmt(s.median_gap) << "\n";
  bool oracle_ok = true;
  if (origin) {
    double worst = 0;
    for (const auto& r : reps)
      if (r.ok)
        if (auto cf = closed_form_origin(k, r.w))
          worst = std::max({worst, std::abs(r.c_lower - *cf), std::abs(r.l_upper - *cf)});
    oracle_ok = worst <= 1e-3;
    out << "max |bound - closed form| " << fmt(worst) << "\n";
  }
  if (s.failures * 10 > s.pairs) {
    out << "FAIL: " << s.failures << " of " << s.pairs << " pairs failed\n";
    return kExitTooManyFailures;
  }
  bool pass = s.sound && s.within == s.pairs - s.failures && oracle_ok;
  out << (pass ? "PASS" : "FAIL") << ": max gap " << fmt(s.max_gap) << (pass ? " <= " : " vs ") << "tolerance "
      << fmt(cfg.tolerance) << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_selftest(unsigned seed, int jobs, bool quick, std::ostream& out) {
  AcceptanceOptions o;
  o.seed = seed;
  o.jobs = jobs;
  o.scale = quick ? 0.1 : 1.0;
  bool all = true;
  for (const auto& c : all_criteria()) {
    CriterionResult r = c(o);
    all = all && r.pass;
    out << format_result(r) << std::endl;
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

void RunConfig::validate() const {
  if (samples < 1) throw UsageError("samples must be >= 1");
  if (n < 2 || n > 16) throw UsageError("n must be in [2, 16]");
  if (disc_degree < 1) throw UsageError("disc_degree must be >= 1");
  if (boundary_grid < 8) throw UsageError("boundary_grid must be >= 8");
  if (!(margin > 0 && margin < 0.5)) throw UsageError("margin must be in (0, 0.5)");
  if (format != "json" && format != "csv") throw UsageError("format must be json or csv");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    try {
      if (k == "seed") cfg.seed = static_cast<unsigned>(std::stoul(v));
      else if (k == "n") cfg.n = std::stoi(v);
      else if (k == "samples") cfg.samples = std::stoi(v);
      else if (k == "disc_degree") cfg.disc_degree = std::stoi(v);
      else if (k == "boundary_grid") cfg.boundary_grid = std::stoi(v);
      else if (k == "margin") cfg.margin = std::stod(v);
      else if (k == "tolerance") cfg.tolerance = std::stod(v);
      else if (k == "output") cfg.output = v;
      else if (k == "format") cfg.format = v;
      else if (k == "jobs") cfg.jobs = std::stoi(v);
      else throw UsageError("unknown config key '" + k + "'");
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const UsageError*>(&e)) throw;
      throw UsageError("bad value for '" + k + "': " + v);
    }
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sided estimates of invariant distances on LHat, the Lie ball and the tetrablock"};
  app.require_subcommand(1);

  std::string dom, p1, p2;
  bool as_json = false, origin = false, identical = false, timing = false, quick = false;

  auto* member = app.add_subcommand("member", "membership test with the inequality values");
  member->add_option("domain", dom, "lhat | lieball | tetra | disc")->required();
  member->add_option("point", p1, "JSON array of [re, im] pairs")->required();

  Flags fd;
  auto* dist = app.add_subcommand("dist", "Caratheodory lower and Lempert upper bounds for a pair");
  dist->add_option("domain", dom)->required();
  dist->add_option("z", p1, "first point, or 0")->required();
  dist->add_option("w", p2, "second point")->required();
  dist->add_flag("--json", as_json, "print the full report");
  fd.add(dist, false);

  Flags fk;
  auto* kappa = app.add_subcommand("kappa", "Kobayashi metric at the origin");
  kappa->add_option("domain", dom)->required();
  kappa->add_option("X", p1, "tangent vector")->required();
  fk.add(kappa, false);

  auto* normalize = app.add_subcommand("normalize", "normal form of a point or a pair");
  normalize->add_option("domain", dom)->required();
  normalize->add_option("z", p1)->required();
  normalize->add_option("w", p2);

  Flags fv;
  dom = "lhat";
  auto* verify = app.add_subcommand("verify-lempert", "gap report on random pairs");
  verify->add_option("--domain", dom, "lhat | lieball | tetra | disc");
  verify->add_flag("--origin", origin, "pairs (0, w), compared with the closed form");
  verify->add_flag("--identical", identical, "pairs (w, w)");
  verify->add_flag("--timing", timing, "fill the seconds column");
  fv.add(verify, true);

  unsigned st_seed = 0;
  int st_jobs = 1;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  auto* o_st_seed = selftest->add_option("--seed", st_seed);
  selftest->add_option("--jobs", st_jobs);
  selftest->add_flag("--quick", quick, "a tenth of the samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*member) return cmd_member(dom, p1, out);
    if (*dist) return cmd_dist(dom, p1, p2, fd.resolve(), as_json, out);
    if (*kappa) return cmd_kappa(dom, p1, fk.resolve(), out);
    if (*normalize) return cmd_normalize(dom, p1, p2, out);
    if (*verify) return cmd_verify(dom, fv.resolve(), origin, identical, timing, out);
    if (*selftest) return cmd_selftest(o_st_seed->count() ? st_seed : env_seed(7), st_jobs, quick, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NormalizationFailure& e) {
    err << "normalization failed: " << e.what() << " (residual " << e.residual << ")\n";
    return kExitNormalization;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    out << "non-member: " << e.what() << "\n";
    return kExitNotMember;
  }
  return kExitUsage;
}

}  // namespace lempertlab
