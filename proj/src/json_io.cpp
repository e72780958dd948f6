#include "ultra/json_io.hpp"

#include <cstdint>
#include <limits>
#include <sstream>

#include "ultra/errors.hpp"

namespace ultra {

namespace {

Value value_from_json(const Json& j) {
  if (!j.is_string())
    throw ParseError("values must be rational strings", {{"got", j.dump()}});
  return Value::parse(j.get<std::string>());
}

const Json& need(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field: ") + key);
  return j.at(key);
}

}  // namespace

Json range_set_to_json(const RangeSet& s) {
  Json j;
  switch (s.kind()) {
    case RangeSet::Kind::Finite: {
      j["kind"] = "finite";
      Json values = Json::array();
      for (const Value& v : s.finite_values()) values.push_back(v.str());
      j["values"] = std::move(values);
      break;
    }
    case RangeSet::Kind::Grid:
      j["kind"] = "grid";
      j["ratio"] = s.grid_ratio().str();
      if (s.grid_kmin())
        j["kmin"] = *s.grid_kmin();
      else
        j["kmin"] = nullptr;
      j["kmax"] = s.grid_kmax();
      break;
    case RangeSet::Kind::All:
      j["kind"] = "all";
      break;
    case RangeSet::Kind::Dyadic:
      j["kind"] = "dyadic";
      break;
  }
  return j;
}

RangeSet range_set_from_json(const Json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "finite") {
    std::vector<Value> values;
    for (const auto& v : need(j, "values")) values.push_back(value_from_json(v));
    return RangeSet::finite(std::move(values));
  }
  if (kind == "grid") {
    std::optional<long> kmin;
    const Json& jk = need(j, "kmin");
    if (!jk.is_null()) kmin = jk.get<long>();
    return RangeSet::grid(value_from_json(need(j, "ratio")), kmin,
                          need(j, "kmax").get<long>());
  }
  if (kind == "all") return RangeSet::all();
  if (kind == "dyadic") return RangeSet::dyadic();
  throw ParseError("unknown range set kind", {{"kind", kind}});
}

Json space_to_json(const FiniteUltrametricSpace& x) {
  Json j;
  j["points"] = x.labels();
  Json rows = Json::array();
  for (size_t i = 0; i < x.size(); ++i) {
    Json row = Json::array();
    for (size_t k = 0; k < x.size(); ++k) row.push_back(x.distance(i, k).str());
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  j["range_set"] = range_set_to_json(x.range());
  return j;
}

DistanceMatrix raw_matrix_from_json(const Json& j) {
  DistanceMatrix m;
  for (const auto& p : need(j, "points")) m.labels.push_back(p.get<std::string>());
  for (const auto& row : need(j, "dist")) {
    m.dist.emplace_back();
    for (const auto& v : row) m.dist.back().push_back(value_from_json(v));
  }
  return m;
}

DistanceMatrix raw_matrix_from_csv(const std::string& text) {
  DistanceMatrix m;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (!isspace(static_cast<unsigned char>(c))) {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (header) {
      m.labels = cells;
      header = false;
      continue;
    }
    m.dist.emplace_back();
    for (const auto& c : cells) m.dist.back().push_back(Value::parse(c));
  }
  return m;
}

FiniteUltrametricSpace space_from_json(const Json& j) {
  return validate(raw_matrix_from_json(j), range_set_from_json(need(j, "range_set")));
}

FiniteUltrametricSpace space_from_json(const Json& j, const RangeSet& range) {
  if (j.contains("range_set")) return space_from_json(j);
  return validate(raw_matrix_from_json(j), range);
}

FiniteUltrametricSpace space_from_csv(const std::string& text, const RangeSet& range) {
  return validate(raw_matrix_from_csv(text), range);
}

Json vector_to_json(const UltraVector& v) {
  Json segs = Json::array();
  for (const auto& seg : v.segments()) {
    Json coeffs = Json::object();
    for (const auto& [label, n] : seg.coeffs) {
      // integer coefficients; huge ones fall back to strings
      if (n >= std::numeric_limits<std::int64_t>::min() &&
          n <= std::numeric_limits<std::int64_t>::max())
        coeffs[label] = static_cast<std::int64_t>(n);
      else
        coeffs[label] = n.str();
    }
    segs.push_back(Json{{"upto", seg.upto.str()}, {"coeffs", std::move(coeffs)}});
  }
  return Json{{"segments", std::move(segs)}};
}

UltraVector vector_from_json(const Json& j) {
  std::vector<UltraVector::Segment> segs;
  for (const auto& js : need(j, "segments")) {
    UltraVector::Segment seg;
    seg.upto = value_from_json(need(js, "upto"));
    for (const auto& [label, n] : need(js, "coeffs").items()) {
      if (n.is_string())
        seg.coeffs[label] = BigInt(n.get<std::string>());
      else
        seg.coeffs[label] = BigInt(n.get<long>());
    }
    segs.push_back(std::move(seg));
  }
  return UltraVector::from_segments(std::move(segs));
}

Json problem_to_json(const InterpolationProblem& p) {
  Json j;
  j["ambient"] = space_to_json(p.ambient);
  Json family = Json::array();
  for (const auto& entry : p.family) {
    Json rows = Json::array();
    for (size_t i = 0; i < entry.prescribed.size(); ++i) {
      Json row = Json::array();
      for (size_t k = 0; k < entry.prescribed.size(); ++k)
        row.push_back(entry.prescribed.distance(i, k).str());
      rows.push_back(std::move(row));
    }
    family.push_back(Json{{"subset", entry.subset}, {"matrix", std::move(rows)}});
  }
  j["family"] = std::move(family);
  return j;
}

InterpolationProblem problem_from_json(const Json& j) {
  InterpolationProblem p;
  p.ambient = space_from_json(need(j, "ambient"));
  for (const auto& je : need(j, "family")) {
    KeyFamilyEntry entry;
    for (const auto& l : need(je, "subset")) entry.subset.push_back(l.get<std::string>());
    DistanceMatrix m;
    m.labels = entry.subset;
    for (const auto& row : need(je, "matrix")) {
      m.dist.emplace_back();
      for (const auto& v : row) m.dist.back().push_back(value_from_json(v));
    }
    entry.prescribed = validate(m, p.ambient.range_ptr());
    p.family.push_back(std::move(entry));
  }
  return p;
}

namespace {

Json radius_rule_to_json(const RadiusRule& r) {
  if (r.kind() == RadiusRule::Kind::Geometric)
    return Json{{"kind", "grid"}, {"ratio", r.factor().str()}};
  return Json{{"kind", "harmonic"}};
}

RadiusRule radius_rule_from_json(const Json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "grid") return RadiusRule::geometric(value_from_json(need(j, "ratio")));
  if (kind == "harmonic") return RadiusRule::harmonic();
  throw ParseError("unknown radius rule", {{"kind", kind}});
}

Json block_rule_to_json(const BlockRule& b) {
  switch (b.kind()) {
    case BlockRule::Kind::EquidistantGrowing:
      return Json{{"kind", "equidistant-growing"}, {"start_size", b.parameter()}};
    case BlockRule::Kind::EquidistantConstant:
      return Json{{"kind", "equidistant-constant"}, {"size", b.parameter()}};
    case BlockRule::Kind::Cycle: {
      Json spaces = Json::array();
      for (const auto& s : b.cycle_spaces()) spaces.push_back(space_to_json(s));
      return Json{{"kind", "cycle"}, {"spaces", std::move(spaces)}};
    }
  }
  throw InvalidArgument("unreachable");
}

BlockRule block_rule_from_json(const Json& j) {
  std::string kind = need(j, "kind").get<std::string>();
  if (kind == "equidistant-growing")
    return BlockRule::equidistant_growing(need(j, "start_size").get<long>());
  if (kind == "equidistant-constant")
    return BlockRule::equidistant_constant(need(j, "size").get<long>());
  if (kind == "cycle") {
    std::vector<FiniteUltrametricSpace> spaces;
    for (const auto& js : need(j, "spaces")) spaces.push_back(space_from_json(js));
    return BlockRule::cycle(std::move(spaces));
  }
  throw ParseError("unknown block rule", {{"kind", kind}});
}

}  // namespace

Json telescope_to_json(const TelescopeSpace& t) {
  Json j;
  j["radii"] = radius_rule_to_json(t.radii());
  j["offset"] = t.offset();
  j["blocks"] = block_rule_to_json(t.blocks());
  j["range_set"] = range_set_to_json(t.range());
  return j;
}

TelescopeSpace telescope_from_json(const Json& j) {
  RangeSet range = j.contains("range_set") ? range_set_from_json(j.at("range_set"))
                                           : RangeSet::all();
  long offset = j.contains("offset") ? j.at("offset").get<long>() : 0;
  return TelescopeSpace(radius_rule_from_json(need(j, "radii")), offset,
                        block_rule_from_json(need(j, "blocks")), std::move(range));
}

}  // namespace ultra
