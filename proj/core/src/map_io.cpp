#include "pcim/map_io.hpp"

#include <fstream>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

Rational parse_rational_field(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string())
    raise(errc::bad_spec, where + ": rationals must be \"p/q\" strings (decimal literals are rejected)");
  auto r = Rational::parse(v.get<std::string>());
  if (!r) raise(errc::bad_spec, where + ": cannot parse rational '" + v.get<std::string>() + "'");
  return *r;
}

}  // namespace

RawMapSpec parse_map_spec(const nlohmann::json& doc) {
  if (!doc.is_object()) raise(errc::bad_spec, "map spec: top-level JSON object expected");
  RawMapSpec raw;
  if (!doc.contains("endpoints") || !doc["endpoints"].is_array())
    raise(errc::bad_spec, "map spec: 'endpoints' array required");
  for (std::size_t i = 0; i < doc["endpoints"].size(); ++i)
    raw.endpoints.push_back(parse_rational_field(doc["endpoints"][i], "endpoints[" + std::to_string(i) + "]"));

  if (!doc.contains("branches") || !doc["branches"].is_array())
    raise(errc::bad_spec, "map spec: 'branches' array required");
  for (std::size_t i = 0; i < doc["branches"].size(); ++i) {
    const auto& b = doc["branches"][i];
    const std::string where = "branches[" + std::to_string(i) + "]";
    if (!b.is_object() || !b.contains("slope") || !b.contains("intercept"))
      raise(errc::bad_spec, where + ": object with 'slope' and 'intercept' required");
    raw.branches.push_back(
        RawBranch{parse_rational_field(b["slope"], where + ".slope"), parse_rational_field(b["intercept"], where + ".intercept")});
  }

  if (doc.contains("open_ends")) {
    const auto& oe = doc["open_ends"];
    if (!oe.is_array() || oe.size() != 2 || !oe[0].is_boolean() || !oe[1].is_boolean())
      raise(errc::bad_spec, "map spec: 'open_ends' must be [bool, bool]");
    raw.open_ends = {oe[0].get<bool>(), oe[1].get<bool>()};
  }
  if (doc.contains("lambda")) raw.lambda = parse_rational_field(doc["lambda"], "lambda");
  return raw;
}

RawMapSpec load_map_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::bad_spec, "cannot open map spec file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::bad_spec, "invalid JSON in " + path + ": " + e.what());
  }
  return parse_map_spec(doc);
}

nlohmann::ordered_json map_spec_to_json(const RawMapSpec& raw) {
  nlohmann::ordered_json doc;
  doc["endpoints"] = nlohmann::ordered_json::array();
  for (const auto& e : raw.endpoints) doc["endpoints"].push_back(e.str());
  doc["branches"] = nlohmann::ordered_json::array();
  for (const auto& b : raw.branches)
    doc["branches"].push_back({{"slope", b.slope.str()}, {"intercept", b.intercept.str()}});
  doc["open_ends"] = {raw.open_ends[0], raw.open_ends[1]};
  if (raw.lambda) doc["lambda"] = raw.lambda->str();
  return doc;
}

void save_map_spec(const RawMapSpec& raw, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(errc::bad_spec, "cannot write map spec file: " + path);
  out << map_spec_to_json(raw).dump(2) << "\n";
}

std::vector<std::pair<std::string, RawMapSpec>> gallery() {
  auto rat = [](const char* s) { return *Rational::parse(s); };
  std::vector<std::pair<std::string, RawMapSpec>> out;

  {
    RawMapSpec e1;
    e1.endpoints = {rat("0"), rat("1/2"), rat("1")};
    e1.branches = {{rat("1/2"), rat("0")}, {rat("1/2"), rat("1/2")}};
    out.emplace_back("e1_halving", std::move(e1));
  }
  {
    RawMapSpec e2;
    e2.endpoints = {rat("0"), rat("2/3"), rat("1")};
    e2.branches = {{rat("9/10"), rat("2/5")}, {rat("9/10"), rat("-3/5")}};
    out.emplace_back("e2_wrap", std::move(e2));
  }
  {
    // Four injective pieces with mixed orientation; no one-sided limit sits on
    // a piece boundary.
    RawMapSpec four;
    four.endpoints = {rat("0"), rat("1/4"), rat("1/2"), rat("3/4"), rat("1")};
    four.branches = {{rat("1/2"), rat("2/5")},
                     {rat("-1/2"), rat("18/25")},
                     {rat("2/3"), rat("-1/6")},
                     {rat("-3/5"), rat("71/100")}};
    out.emplace_back("four_piece", std::move(four));
  }
  {
    // Continuous zig-zag; every local extremum sits on a piece boundary, so
    // each branch is monotone even though the map is globally non-injective.
    RawMapSpec six;
    six.endpoints = {rat("0"), rat("1/6"), rat("1/3"), rat("1/2"), rat("2/3"), rat("5/6"), rat("1")};
    six.branches = {{rat("3/4"), rat("2/5")},     // rises to 21/40 at 1/6
                    {rat("-3/4"), rat("13/20")},  // falls back to 2/5 at 1/3
                    {rat("3/4"), rat("3/20")},    // rises to 21/40 at 1/2
                    {rat("-3/4"), rat("9/10")},   // falls to 2/5 at 2/3
                    {rat("3/4"), rat("-1/10")},   // rises to 21/40 at 5/6
                    {rat("-3/4"), rat("23/20")}};
    out.emplace_back("six_piece_split", std::move(six));
  }
  return out;
}

}  // namespace pcim
