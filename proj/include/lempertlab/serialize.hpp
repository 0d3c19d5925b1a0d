#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lempertlab/extremal.hpp"

namespace lempertlab {

using json = nlohmann::json;

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// points are arrays of [re, im] pairs
json point_to_json(const Point& z);
Point point_from_json(const json& j);
Point parse_point(const std::string& text);

json cplx_to_json(cplx c);
cplx cplx_from_json(const json& j);

json to_json(const GroupElement& g);
GroupElement group_element_from_json(const json& j);
json to_json(const LhatAutomorphism& phi);
LhatAutomorphism lhat_automorphism_from_json(const json& j);
json to_json(const TetraMobius& m);
TetraMobius tetra_mobius_from_json(const json& j);

json to_json(const CaratheodoryWitness& w);
json to_json(const AnalyticDisc& d);
json to_json(const DistanceReport& r, bool timing = false);
json to_json(const GapSummary& s);

// columns z, w, c_lower, l_upper, gap, sigma, witness_lambda, seconds; the seconds
// field stays empty unless timing is on, so equal runs give equal bytes
void write_csv(std::ostream& os, const std::vector<DistanceReport>& reports, bool timing = false);

std::string format_double(double v);

}  // namespace lempertlab
