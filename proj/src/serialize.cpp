#include "lempertlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lempertlab {

namespace {

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a non-empty array of rows");
  const size_t n = j.size();
  Eigen::MatrixXd M(n, j[0].size());
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != static_cast<size_t>(M.cols())) throw ParseError("matrix: ragged rows");
    for (size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number()) throw ParseError("matrix: non-numeric entry");
      M(i, k) = j[i][k].get<double>();
    }
  }
  return M;
}

json cmatrix_to_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(cplx_to_json(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cplx_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex: expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(const Point& z) {
  json a = json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) a.push_back(cplx_to_json(z[i]));
  return a;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("point: expected a non-empty array of [re, im] pairs");
  Point z(j.size());
  for (size_t i = 0; i < j.size(); ++i) z[i] = cplx_from_json(j[i]);
  if (!all_finite(z)) throw ParseError("point: non-finite coordinate");
  return z;
}

Point parse_point(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("point: ") + e.what());
  }
  return point_from_json(j);
}

json to_json(const GroupElement& g) { return {{"kind", "group_element"}, {"n", g.n()}, {"matrix", matrix_to_json(g.M)}}; }

GroupElement group_element_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "group_element") throw ParseError("group element: wrong kind");
  GroupElement g(matrix_from_json(j.at("matrix")));
  if (!g.valid()) throw InvalidElement("group element: matrix is not in G(n)");
  return g;
}

json to_json(const LhatAutomorphism& phi) {
  return {{"kind", "lhat_automorphism"}, {"n", phi.n()}, {"g", to_json(phi.g)}};
}

LhatAutomorphism lhat_automorphism_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "lhat_automorphism") throw ParseError("automorphism: wrong kind");
  return descend(group_element_from_json(j.at("g")));
}

json to_json(const TetraMobius& m) {
  return {{"kind", "tetra_mobius"},
          {"beta1", cplx_to_json(m.beta1)},
          {"beta2", cplx_to_json(m.beta2)},
          {"eta1", cplx_to_json(m.eta1)},
          {"eta2", cplx_to_json(m.eta2)},
          {"flip", m.flip}};
}

TetraMobius tetra_mobius_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "tetra_mobius") throw ParseError("tetra map: wrong kind");
  TetraMobius m;
  m.beta1 = cplx_from_json(j.at("beta1"));
  m.beta2 = cplx_from_json(j.at("beta2"));
  m.eta1 = cplx_from_json(j.at("eta1"));
  m.eta2 = cplx_from_json(j.at("eta2"));
  m.flip = j.at("flip").get<bool>();
  return m;
}

json to_json(const CaratheodoryWitness& w) {
  json j = {{"domain", to_string(w.kind)},
            {"family", w.family == SliceFamily::G ? "G" : "H"},
            {"lambda", cplx_to_json(w.lambda)},
            {"pre", to_json(w.pre)}};
  json chain = json::array();
  for (const ChainLink& l : w.chain)
    chain.push_back({{"family", l.family == SliceFamily::G ? "G" : "H"},
                     {"u", cplx_to_json(l.u)},
                     {"k", cplx_to_json(l.k)},
                     {"a", cplx_to_json(l.a)}});
  j["chain"] = chain;
  if (w.frame) j["frame"] = to_json(*w.frame);
  if (w.ball_frame) j["ball_frame"] = to_json(*w.ball_frame);
  if (w.functional.size()) j["functional"] = point_to_json(w.functional);
  return j;
}

json to_json(const AnalyticDisc& d) {
  json j = {{"domain", to_string(d.kind)}, {"type", to_string(d.type)}, {"sigma", d.sigma},
            {"z", point_to_json(d.z)}, {"w", point_to_json(d.w)}};
  if (d.type == DiscKind::Polynomial || d.type == DiscKind::Constant) j["coeffs"] = cmatrix_to_json(d.coeffs);
  if (d.type == DiscKind::MatrixLift) {
    j["M0"] = cmatrix_to_json(d.M0);
    j["K"] = cmatrix_to_json(d.K);
    j["r"] = d.r;
  }
  if (d.frame_inv) j["frame"] = to_json(*d.frame_inv);
  if (d.ball_inv) j["ball_frame"] = to_json(*d.ball_inv);
  return j;
}

json to_json(const DistanceReport& r, bool timing) {
  json j = {{"z", point_to_json(r.z)}, {"w", point_to_json(r.w)}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
  } else {
    j["c_lower"] = r.c_lower;
    j["l_upper"] = r.l_upper;
    j["gap"] = r.gap;
    j["sigma"] = r.sigma;
    j["witness_lambda"] = cplx_to_json(r.witness_lambda);
    j["chain_levels"] = r.chain_levels;
    j["disc_family"] = r.disc_family;
    j["witness"] = to_json(r.lower.witness);
    j["disc"] = to_json(r.upper.disc);
  }
  if (timing) j["seconds"] = r.seconds;
  return j;
}

json to_json(const GapSummary& s) {
  return {{"pairs", s.pairs},       {"failures", s.failures}, {"max_gap", s.max_gap},
          {"median_gap", s.median_gap}, {"within", s.within}, {"sound", s.sound}};
}

void write_csv(std::ostream& os, const std::vector<DistanceReport>& reports, bool timing) {
  os << "z,w,c_lower,l_upper,gap,sigma,witness_lambda,seconds\n";
  for (const auto& r : reports) {
    os << csv_quote(point_to_json(r.z).dump()) << ',' << csv_quote(point_to_json(r.w).dump()) << ',';
    if (r.ok) {
      os << format_double(r.c_lower) << ',' << format_double(r.l_upper) << ',' << format_double(r.gap) << ','
         << format_double(r.sigma) << ',' << csv_quote(cplx_to_json(r.witness_lambda).dump());
    } else {
      os << ",,,,";
    }
    os << ',';
    if (timing) os << format_double(r.seconds);
    os << '\n';
  }
}

}  // namespace lempertlab
