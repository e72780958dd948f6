#include "ultra/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ultra/errors.hpp"
#include "ultra/generic.hpp"
#include "ultra/json_io.hpp"

namespace ultra::cli {

namespace {

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

/// Accumulates the report; every subcommand funnels through one of these.
struct Report {
  Json j;
  bool all_pass = true;

  explicit Report(const std::string& command) {
    j["command"] = command;
    j["inputs"] = Json::object();
    j["outputs"] = Json::object();
    j["verdicts"] = Json::array();
    j["exact_values"] = Json::object();
  }

  void input(const std::string& name, const std::string& source, const std::string& data) {
    j["inputs"][name] = Json{{"source", source}, {"digest", fnv1a(data)}};
  }
  void verdict(const std::string& name, bool pass, Json witness = nullptr) {
    j["verdicts"].push_back(Json{{"name", name}, {"pass", pass}, {"witness", witness}});
    all_pass = all_pass && pass;
  }
  Json& outputs() { return j["outputs"]; }
  void exact(const std::string& name, const Value& v) { j["exact_values"][name] = v.str(); }
};

struct Loader {
  std::string range_arg;    // --range-set: inline JSON or a file path
  std::uint64_t seed = 0x5eed0f42u;

  std::string slurp(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read file", {{"path", path}});
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  Json json_of(const std::string& text, const std::string& where) const {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("bad JSON: ") + e.what(), {{"source", where}});
    }
  }

  std::optional<RangeSet> range() const {
    if (range_arg.empty()) return std::nullopt;
    if (!range_arg.empty() && range_arg.front() == '{')
      return range_set_from_json(json_of(range_arg, "--range-set"));
    return range_set_from_json(json_of(slurp(range_arg), range_arg));
  }

  FiniteUltrametricSpace space(const std::string& path, Report& rep,
                               const std::string& slot) const {
    std::string data = slurp(path);
    rep.input(slot, path, data);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
      auto r = range();
      if (!r) throw InvalidArgument("CSV input needs --range-set");
      return space_from_csv(data, *r);
    }
    Json j = json_of(data, path);
    auto r = range();
    return r ? space_from_json(j, *r) : space_from_json(j);
  }

  DistanceMatrix raw(const std::string& path, Report& rep, const std::string& slot) const {
    std::string data = slurp(path);
    rep.input(slot, path, data);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
      return raw_matrix_from_csv(data);
    return raw_matrix_from_json(json_of(data, path));
  }

  InterpolationProblem problem(const std::string& path, Report& rep) const {
    std::string data = slurp(path);
    rep.input("problem", path, data);
    return problem_from_json(json_of(data, path));
  }

  TelescopeSpace telescope(const std::string& path, Report& rep) const {
    if (path == "standard") {
      rep.input("telescope", "standard", "standard");
      return standard_telescope();
    }
    std::string data = slurp(path);
    rep.input("telescope", path, data);
    return telescope_from_json(json_of(data, path));
  }
};

Json witness_json(const DoublingWitness& w) {
  return Json{{"subset", w.subset},
              {"card", w.subset.size()},
              {"alpha", w.alpha_min.str()},
              {"delta", w.delta.str()}};
}

Json verdicts_json(const std::vector<TransmissibleVerdict>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    Json jv{{"C", v.parameter.c.str()},
            {"alpha", v.parameter.alpha.str()},
            {"holds", v.holds},
            {"exhaustive", v.exhaustive}};
    jv["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
    out.push_back(std::move(jv));
  }
  return out;
}

std::vector<DoublingCheck> parse_grid(const std::string& cs, const std::string& as) {
  auto split_values = [](const std::string& s) {
    std::vector<Value> out;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',') {
        if (!cur.empty()) out.push_back(Value::parse(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return out;
  };
  std::vector<DoublingCheck> grid;
  for (const Value& c : split_values(cs))
    for (const Value& a : split_values(as)) grid.push_back({c, a});
  return grid;
}

void check_restriction(Report& rep, const std::string& name,
                       const FiniteUltrametricSpace& whole,
                       const std::map<std::string, std::string>& embedding,
                       const FiniteUltrametricSpace& part) {
  bool ok = true;
  Json witness = nullptr;
  for (size_t i = 0; i < part.size() && ok; ++i)
    for (size_t j = 0; j < part.size() && ok; ++j) {
      const auto& a = embedding.at(part.label(i));
      const auto& b = embedding.at(part.label(j));
      if (whole.distance(a, b) != part.distance(i, j)) {
        ok = false;
        witness = Json{{"x", part.label(i)}, {"y", part.label(j)}};
      }
    }
  rep.verdict(name, ok, witness);
}

Json embeddings_json(const AmalgamResult& r) {
  Json out = Json::array();
  for (const auto& e : r.embeddings) {
    Json m = Json::object();
    for (const auto& [from, to] : e) m[from] = to;
    out.push_back(std::move(m));
  }
  return out;
}

int finish(Report& rep, std::ostream& out, const std::string& out_path) {
  std::string text = rep.j.dump(2);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw ParseError("cannot write output file", {{"path", out_path}});
    f << text << "\n";
  }
  out << text << "\n";
  return rep.all_pass ? 0 : 2;
}

struct Common {
  Loader loader;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--range-set", c.loader.range_arg,
                  "range set (inline JSON or a file path)");
  cmd->add_option("--seed", c.loader.seed, "seed for randomized certificates");
  cmd->add_option("--out", c.out_path, "also write the report to this file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computations on finite and effectively presented ultrametric spaces"};
  app.require_subcommand(1);
  int exit_code = 0;

  Common c;
  std::string path_a, path_b;
  std::string eps_s, r_s, s_s, eta_s, tol_s, c_list = "1,10,100", a_list = "1,2,3";
  std::string radii_s = "harmonic", target_s;
  long k = 3;
  long trials = 0, coeff_bound = 2;
  bool exhaustive = false;

  auto wrap = [&](const std::string& name, std::function<int(Report&)> body) {
    return [&, name, body]() {
      Report rep(name);
      exit_code = body(rep);
      exit_code = std::max(exit_code, finish(rep, out, c.out_path));
    };
  };

  // validate
  {
    auto* cmd = app.add_subcommand("validate", "run the space validator");
    cmd->add_option("space", path_a, "space JSON/CSV")->required();
    add_common(cmd, c);
    cmd->callback(wrap("validate", [&](Report& rep) {
      DistanceMatrix m = c.loader.raw(path_a, rep, "space");
      auto r = c.loader.range();
      RangeSet range = r ? *r : RangeSet::all();
      if (!r && path_a.size() > 5 && path_a.substr(path_a.size() - 5) == ".json") {
        Json j = c.loader.json_of(c.loader.slurp(path_a), path_a);
        if (j.contains("range_set")) range = range_set_from_json(j["range_set"]);
      }
      try {
        FiniteUltrametricSpace sp = validate(m, range);
        rep.verdict("valid", true);
        rep.outputs()["space"] = space_to_json(sp);
        rep.exact("diameter", sp.diameter());
      } catch (const Error& e) {
        rep.verdict("valid", false, Json{{"error", e.code()}, {"details", e.details()}});
        auto iso = isosceles_witness(m);
        if (iso)
          rep.outputs()["non_isosceles_triple"] =
              Json::array({m.labels[(*iso)[0]], m.labels[(*iso)[1]], m.labels[(*iso)[2]]});
      }
      return 0;
    }));
  }

  // dlps
  {
    auto* cmd = app.add_subcommand("dlps", "canonical join space of a finite range set");
    add_common(cmd, c);
    cmd->callback(wrap("dlps", [&](Report& rep) {
      auto r = c.loader.range();
      if (!r) throw InvalidArgument("dlps needs --range-set");
      FiniteUltrametricSpace sp = join_space(*r);
      bool realized_all = true;
      for (const Value& v : r->finite_values()) {
        bool found = v.is_zero();
        for (size_t i = 0; i < sp.size() && !found; ++i)
          for (size_t j = i + 1; j < sp.size() && !found; ++j)
            found = sp.distance(i, j) == v;
        realized_all = realized_all && found;
      }
      rep.verdict("realizes-every-value", realized_all);
      rep.outputs()["space"] = space_to_json(sp);
      return 0;
    }));
  }

  // truncate
  {
    auto* cmd = app.add_subcommand("truncate", "cap all distances at a level in S+");
    cmd->add_option("space", path_a)->required();
    cmd->add_option("--eps", eps_s)->required();
    add_common(cmd, c);
    cmd->callback(wrap("truncate", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "space");
      Value eps = Value::parse(eps_s);
      FiniteUltrametricSpace y = truncate(x, eps);
      bool formula = true;
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
          formula = formula && y.distance(i, j) == meet(x.distance(i, j), eps);
      rep.verdict("pointwise-min", formula);
      rep.outputs()["space"] = space_to_json(y);
      rep.exact("eps", eps);
      return 0;
    }));
  }

  // product
  {
    auto* cmd = app.add_subcommand("product", "max-product of two spaces");
    cmd->add_option("x", path_a)->required();
    cmd->add_option("y", path_b)->required();
    add_common(cmd, c);
    cmd->callback(wrap("product", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "x");
      FiniteUltrametricSpace y = c.loader.space(path_b, rep, "y");
      FiniteUltrametricSpace p = sup_product(x, y);
      rep.verdict("size", p.size() == x.size() * y.size());
      rep.outputs()["space"] = space_to_json(p);
      return 0;
    }));
  }

  // ud / dmax
  {
    auto* cmd = app.add_subcommand("ud", "ultrametric distance between two matrices");
    cmd->add_option("d", path_a)->required();
    cmd->add_option("e", path_b)->required();
    add_common(cmd, c);
    cmd->callback(wrap("ud", [&](Report& rep) {
      UltrametricPair pair(c.loader.space(path_a, rep, "d"),
                           c.loader.space(path_b, rep, "e"));
      ExtendedValue ud = ud_distance(pair);
      const Value& v = ud.finite();
      bool admissible = true, minimal = true;
      for (size_t i = 0; i < pair.d.size(); ++i)
        for (size_t j = i + 1; j < pair.d.size(); ++j) {
          admissible = admissible &&
                       pair.d.distance(i, j) <= join(pair.e.distance(i, j), v) &&
                       pair.e.distance(i, j) <= join(pair.d.distance(i, j), v);
          if (pair.d.distance(i, j) != pair.e.distance(i, j))
            minimal = minimal &&
                      join(pair.d.distance(i, j), pair.e.distance(i, j)) <= v;
        }
      rep.verdict("admissible", admissible);
      rep.verdict("minimal-on-disagreements", minimal);
      rep.outputs()["ud"] = v.str();
      rep.exact("ud", v);
      return 0;
    }));
  }
  {
    auto* cmd = app.add_subcommand("dmax", "uniform distance between two matrices");
    cmd->add_option("d", path_a)->required();
    cmd->add_option("e", path_b)->required();
    add_common(cmd, c);
    cmd->callback(wrap("dmax", [&](Report& rep) {
      UltrametricPair pair(c.loader.space(path_a, rep, "d"),
                           c.loader.space(path_b, rep, "e"));
      Value dv = d_distance(pair);
      ExtendedValue ud = ud_distance(pair);
      rep.verdict("bounded-by-ud", ExtendedValue(dv) <= ud);
      rep.outputs()["dmax"] = dv.str();
      rep.outputs()["ud"] = ud.str();
      rep.exact("dmax", dv);
      return 0;
    }));
  }

  // amalgam
  {
    auto* cmd = app.add_subcommand("amalgam", "disjoint amalgam at separation r");
    cmd->add_option("x", path_a)->required();
    cmd->add_option("y", path_b)->required();
    cmd->add_option("--r", r_s)->required();
    add_common(cmd, c);
    cmd->callback(wrap("amalgam", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "x");
      FiniteUltrametricSpace y = c.loader.space(path_b, rep, "y");
      Value r = Value::parse(r_s);
      AmalgamResult res = amalgam_disjoint(x, y, r);
      check_restriction(rep, "restriction-x", res.space, res.embeddings[0], x);
      check_restriction(rep, "restriction-y", res.space, res.embeddings[1], y);
      bool separated = true;
      for (const auto& lx : x.labels())
        for (const auto& ly : y.labels())
          separated = separated && res.space.distance(lx, ly) >= r;
      rep.verdict("cross-separation", separated);
      rep.outputs()["space"] = space_to_json(res.space);
      rep.outputs()["embeddings"] = embeddings_json(res);
      return 0;
    }));
  }

  // glue
  {
    auto* cmd = app.add_subcommand("glue", "amalgam over the shared subset");
    cmd->add_option("x", path_a)->required();
    cmd->add_option("y", path_b)->required();
    cmd->add_option("--s", s_s)->required();
    add_common(cmd, c);
    cmd->callback(wrap("glue", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "x");
      FiniteUltrametricSpace y = c.loader.space(path_b, rep, "y");
      Value s = Value::parse(s_s);
      AmalgamResult res = glue_over_intersection(x, y, s);
      check_restriction(rep, "restriction-x", res.space, res.embeddings[0], x);
      check_restriction(rep, "restriction-y", res.space, res.embeddings[1], y);
      rep.outputs()["space"] = space_to_json(res.space);
      rep.outputs()["embeddings"] = embeddings_json(res);
      return 0;
    }));
  }

  // copy-amalgam
  {
    auto* cmd = app.add_subcommand("copy-amalgam", "double a space along two matrices");
    cmd->add_option("d", path_a)->required();
    cmd->add_option("e", path_b)->required();
    cmd->add_option("--r", r_s)->required();
    add_common(cmd, c);
    cmd->callback(wrap("copy-amalgam", [&](Report& rep) {
      FiniteUltrametricSpace d = c.loader.space(path_a, rep, "d");
      FiniteUltrametricSpace e = c.loader.space(path_b, rep, "e");
      Value r = Value::parse(r_s);
      AmalgamResult res = copy_amalgam(d, e, r);
      check_restriction(rep, "restriction-original", res.space, res.embeddings[0], d);
      check_restriction(rep, "restriction-copy", res.space, res.embeddings[1], e);
      bool pairs = true;
      for (const auto& [orig, copy] : res.embeddings[1])
        pairs = pairs && res.space.distance(orig, copy) == r;
      rep.verdict("copy-distance", pairs);
      rep.outputs()["space"] = space_to_json(res.space);
      rep.outputs()["embeddings"] = embeddings_json(res);
      return 0;
    }));
  }

  // key-amalgam
  {
    auto* cmd = app.add_subcommand("key-amalgam", "adjoin prescribed copies at level eta");
    cmd->add_option("problem", path_a)->required();
    cmd->add_option("--eta", eta_s, "level in S+ (default: round-up of the sup)");
    add_common(cmd, c);
    cmd->callback(wrap("key-amalgam", [&](Report& rep) {
      InterpolationProblem p = c.loader.problem(path_a, rep);
      Value sup(0);
      for (const auto& entry : p.family)
        sup = join(sup, ud_distance(UltrametricPair(restrict(p.ambient, entry.subset),
                                                    entry.prescribed))
                            .finite());
      Value eta = eta_s.empty()
                      ? (sup.is_zero() ? p.ambient.range().default_positive()
                                       : p.ambient.range().round_up(sup))
                      : Value::parse(eta_s);
      AmalgamResult res = key_amalgam(p.ambient, p.family, eta);
      check_restriction(rep, "restriction-ambient", res.space, res.embeddings[0],
                        p.ambient);
      bool copies = true, levels = true;
      for (size_t i = 0; i < p.family.size(); ++i) {
        FiniteUltrametricSpace pulled = restrict(res.space, [&] {
          std::vector<std::string> ls;
          for (const auto& l : p.family[i].subset)
            ls.push_back(res.embeddings[i + 1].at(l));
          return ls;
        }());
        for (size_t a = 0; a < pulled.size(); ++a)
          for (size_t b = 0; b < pulled.size(); ++b)
            copies = copies &&
                     pulled.distance(a, b) == p.family[i].prescribed.distance(a, b);
        for (const auto& l : p.family[i].subset)
          levels = levels &&
                   res.space.distance(l, res.embeddings[i + 1].at(l)) == eta;
      }
      rep.verdict("restriction-copies", copies);
      rep.verdict("copy-distance-eta", levels);
      rep.outputs()["space"] = space_to_json(res.space);
      rep.outputs()["embeddings"] = embeddings_json(res);
      rep.exact("eta", eta);
      return 0;
    }));
  }

  // embed
  {
    auto* cmd = app.add_subcommand("embed", "isometric embedding into module vectors");
    cmd->add_option("space", path_a)->required();
    add_common(cmd, c);
    cmd->callback(wrap("embed", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "space");
      EmbeddingCertificate cert = embed_finite(x);
      bool isometry = true;
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j)
          isometry = isometry &&
                     delta(cert.images.at(x.label(i)), cert.images.at(x.label(j)),
                           x.range()) == x.distance(i, j);
      rep.verdict("isometry", isometry);
      Json images = Json::object();
      for (const auto& [label, vec] : cert.images) images[label] = vector_to_json(vec);
      rep.outputs()["images"] = std::move(images);
      rep.outputs()["base"] = cert.base_label;
      rep.exact("separation", cert.separation);
      return 0;
    }));
  }

  // independence
  {
    auto* cmd = app.add_subcommand("independence",
                                   "independence certificate; optional submodule sampling");
    cmd->add_option("space", path_a)->required();
    cmd->add_option("--trials", trials, "random integer combinations to norm-check");
    cmd->add_option("--coeff-bound", coeff_bound, "coefficient bound for sampling");
    add_common(cmd, c);
    cmd->callback(wrap("independence", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "space");
      EmbeddingCertificate cert = embed_finite(x);
      IndependenceReport ir = independence_check(cert);
      rep.verdict("full-rank", ir.rank == static_cast<long>(x.size()));
      rep.verdict("distinct-basis-at-critical", ir.distinct_unit_basis);
      rep.outputs()["rank"] = ir.rank;
      rep.exact("critical_value", ir.critical_value);
      if (trials > 0) {
        SubmoduleReport sr =
            submodule_svalued_sample(cert, trials, coeff_bound, c.loader.seed);
        rep.verdict("submodule-norms-in-S", sr.failures == 0,
                    Json{{"trials", sr.trials}, {"failures", sr.failures}});
        Json norms = Json::array();
        for (const auto& s : sr.samples) norms.push_back(s.norm.str());
        rep.outputs()["sampled_norms"] = std::move(norms);
      }
      return 0;
    }));
  }

  // interpolate / extend
  auto interpolation_verdicts = [](Report& rep, const InterpolationProblem& p,
                                   const InterpolationResult& res) {
    bool prescribed = true;
    for (const auto& entry : p.family) {
      FiniteUltrametricSpace got = restrict(res.m, entry.subset);
      for (size_t i = 0; i < got.size(); ++i)
        for (size_t j = 0; j < got.size(); ++j)
          prescribed = prescribed &&
                       got.distance(i, j) == entry.prescribed.distance(i, j);
    }
    rep.verdict("prescriptions-exact", prescribed);
    ExtendedValue ud = ud_distance(UltrametricPair(res.m, p.ambient));
    rep.verdict("sandwich",
                ExtendedValue(res.lower) <= ud && ud <= ExtendedValue(res.upper));
    rep.verdict("quasi-bound", res.upper <= res.quasi_bound || res.lower.is_zero());
    rep.outputs()["m"] = space_to_json(res.m);
    rep.outputs()["ud"] = ud.str();
    rep.outputs()["eta"] = res.eta ? Json(res.eta->str()) : Json(nullptr);
    rep.outputs()["trace"] = res.trace;
    rep.exact("lower", res.lower);
    rep.exact("upper", res.upper);
    if (res.achieved_ratio) rep.exact("achieved_ratio", *res.achieved_ratio);
  };
  {
    auto* cmd = app.add_subcommand("interpolate", "prescribe metrics on disjoint subsets");
    cmd->add_option("problem", path_a)->required();
    add_common(cmd, c);
    cmd->callback(wrap("interpolate", [&](Report& rep) {
      InterpolationProblem p = c.loader.problem(path_a, rep);
      InterpolationResult res = interpolate(p);
      interpolation_verdicts(rep, p, res);
      return 0;
    }));
  }
  {
    auto* cmd = app.add_subcommand("extend", "extend a prescribed metric from a subset");
    cmd->add_option("ambient", path_a)->required();
    cmd->add_option("prescribed", path_b)->required();
    add_common(cmd, c);
    cmd->callback(wrap("extend", [&](Report& rep) {
      FiniteUltrametricSpace ambient = c.loader.space(path_a, rep, "ambient");
      FiniteUltrametricSpace prescribed = c.loader.space(path_b, rep, "prescribed");
      InterpolationProblem p{ambient, {KeyFamilyEntry{prescribed.labels(), prescribed}}};
      InterpolationResult res = interpolate(p);
      interpolation_verdicts(rep, p, res);
      return 0;
    }));
  }

  // telescope / prefix
  {
    auto* cmd = app.add_subcommand("telescope", "summarize a telescope space");
    cmd->add_option("spec", path_a, "spec JSON or 'standard'")->required();
    add_common(cmd, c);
    cmd->callback(wrap("telescope", [&](Report& rep) {
      TelescopeSpace t = c.loader.telescope(path_a, rep);
      Json blocks = Json::array();
      for (long i = 1; i <= 6; ++i)
        blocks.push_back(Json{{"block", i},
                              {"size", t.block_size(i)},
                              {"radius", t.radius(i).str()}});
      rep.outputs()["blocks"] = std::move(blocks);
      rep.outputs()["offset"] = t.offset();
      rep.outputs()["diameter_bound"] = t.radius(1).str();
      FiniteUltrametricSpace prefix = t.finite_prefix(3);
      rep.verdict("prefix-valid", true);
      rep.outputs()["prefix_points"] = prefix.size();
      return 0;
    }));
  }
  {
    auto* cmd = app.add_subcommand("prefix", "materialize the first k blocks plus the limit");
    cmd->add_option("spec", path_a)->required();
    cmd->add_option("--k", k)->required();
    add_common(cmd, c);
    cmd->callback(wrap("prefix", [&](Report& rep) {
      TelescopeSpace t = c.loader.telescope(path_a, rep);
      FiniteUltrametricSpace prefix = t.finite_prefix(k);
      rep.verdict("valid", true);
      rep.outputs()["space"] = space_to_json(prefix);
      return 0;
    }));
  }

  // doubling / witness
  {
    auto* cmd = app.add_subcommand("doubling", "check the subset-cardinality bound");
    cmd->add_option("space", path_a)->required();
    cmd->add_option("--C", r_s)->required();
    cmd->add_option("--alpha", s_s)->required();
    cmd->add_flag("--exhaustive", exhaustive, "force exhaustive subset search");
    add_common(cmd, c);
    cmd->callback(wrap("doubling", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "space");
      DoublingCheck q{Value::parse(r_s), Value::parse(s_s)};
      TransmissibleVerdict v = doubling_check(
          x, q, exhaustive ? SearchMode::Exhaustive : SearchMode::Auto);
      rep.outputs()["holds"] = v.holds;
      rep.outputs()["exhaustive"] = v.exhaustive;
      rep.outputs()["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
      if (v.witness)
        rep.verdict("witness-reverifies",
                    !doubling_bound_holds(static_cast<long>(v.witness->subset.size()), q,
                                          v.witness->delta, v.witness->alpha_min),
                    witness_json(*v.witness));
      else
        rep.verdict("search-completed", true);
      return 0;
    }));
  }
  {
    auto* cmd = app.add_subcommand("witness", "anti-doubling witnesses over a parameter grid");
    cmd->add_option("input", path_a, "space JSON, telescope spec, or 'standard'")->required();
    cmd->add_option("--C-list", c_list);
    cmd->add_option("--alpha-list", a_list);
    add_common(cmd, c);
    cmd->callback(wrap("witness", [&](Report& rep) {
      std::vector<DoublingCheck> grid = parse_grid(c_list, a_list);
      std::vector<TransmissibleVerdict> vs;
      bool is_space = false;
      if (path_a != "standard") {
        Json j = c.loader.json_of(c.loader.slurp(path_a), path_a);
        is_space = j.contains("points");
      }
      if (is_space) {
        FiniteUltrametricSpace x = c.loader.space(path_a, rep, "input");
        vs = anti_doubling_witness(x, grid);
      } else {
        TelescopeSpace t = c.loader.telescope(path_a, rep);
        vs = anti_doubling_witness(t, grid);
      }
      bool all_found = true, reverify = true;
      for (const auto& v : vs) {
        all_found = all_found && v.witness.has_value();
        if (v.witness)
          reverify = reverify && !doubling_bound_holds(
                                     static_cast<long>(v.witness->subset.size()),
                                     v.parameter, v.witness->delta, v.witness->alpha_min);
      }
      rep.verdict("witness-found-for-every-parameter", all_found);
      rep.verdict("witnesses-reverify", reverify);
      rep.outputs()["grid"] = verdicts_json(vs);
      return 0;
    }));
  }

  // approx
  {
    auto* cmd = app.add_subcommand("approx", "revalue distances into a target range set");
    cmd->add_option("space", path_a)->required();
    cmd->add_option("--eps", eps_s)->required();
    cmd->add_option("--target-range", target_s, "target range set (inline JSON or file)")
        ->required();
    add_common(cmd, c);
    cmd->callback(wrap("approx", [&](Report& rep) {
      FiniteUltrametricSpace x = c.loader.space(path_a, rep, "space");
      Value eps = Value::parse(eps_s);
      Loader tl;
      tl.range_arg = target_s;
      RangeSet target = *tl.range();
      FiniteUltrametricSpace y = t_approx(x, target, eps);
      bool tvalued = true, close = true, order = true;
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j) {
          tvalued = tvalued && target.contains(y.distance(i, j));
          close = close && abs_diff(x.distance(i, j), y.distance(i, j)) < eps;
          for (size_t a = 0; a < x.size(); ++a)
            for (size_t b = a + 1; b < x.size(); ++b) {
              if (x.distance(i, j) < x.distance(a, b))
                order = order && y.distance(i, j) < y.distance(a, b);
              if (x.distance(i, j) == x.distance(a, b))
                order = order && y.distance(i, j) == y.distance(a, b);
            }
        }
      rep.verdict("target-valued", tvalued);
      rep.verdict("within-eps", close);
      rep.verdict("order-preserved", order);
      rep.outputs()["space"] = space_to_json(y);
      return 0;
    }));
  }

  // perturb
  {
    auto* cmd = app.add_subcommand("perturb", "replace the eps-tail by an anti-doubling telescope");
    cmd->add_option("spec", path_a, "telescope spec or 'standard'")->required();
    cmd->add_option("--eps", eps_s)->required();
    cmd->add_option("--prefix", k, "prefix depth for the disagreement check");
    cmd->add_option("--C-list", c_list);
    cmd->add_option("--alpha-list", a_list);
    add_common(cmd, c);
    cmd->callback(wrap("perturb", [&](Report& rep) {
      TelescopeSpace t = c.loader.telescope(path_a, rep);
      Value eps = Value::parse(eps_s);
      PerturbedTelescope m = genericity_perturb(t, eps);
      long depth = std::max(k, m.cut() + 2);
      FiniteUltrametricSpace prefix = m.finite_prefix(depth);
      rep.verdict("prefix-valid", true);
      ExtendedValue ud = m.prefix_ud(depth);
      rep.verdict("prefix-ud-within-eps", ud <= ExtendedValue(eps));
      std::vector<TransmissibleVerdict> vs = m.anti_doubling(parse_grid(c_list, a_list));
      bool reverify = true;
      for (const auto& v : vs)
        reverify = reverify && !v.holds && v.witness.has_value();
      rep.verdict("anti-doubling-witnesses", reverify);
      rep.outputs()["cut"] = m.cut();
      rep.outputs()["prefix_ud"] = ud.str();
      rep.outputs()["grid"] = verdicts_json(vs);
      rep.exact("eps", eps);
      return 0;
    }));
  }

  // demo-niemytzki
  {
    auto* cmd = app.add_subcommand("demo-niemytzki",
                                   "Cauchy-without-limit certificate on a sequence space");
    cmd->add_option("--radii", radii_s, "harmonic | grid:<factor>");
    cmd->add_option("--tol", tol_s)->required();
    add_common(cmd, c);
    cmd->callback(wrap("demo-niemytzki", [&](Report& rep) {
      RadiusRule rule = RadiusRule::harmonic();
      RangeSet range = RangeSet::all();
      if (radii_s.rfind("grid:", 0) == 0) {
        Value f = Value::parse(radii_s.substr(5));
        rule = RadiusRule::geometric(f);
        range = RangeSet::grid(Value(1) / f, std::nullopt, -1);
      } else if (radii_s != "harmonic") {
        throw InvalidArgument("radii must be 'harmonic' or 'grid:<factor>'");
      }
      if (auto r = c.loader.range()) range = *r;
      SequenceSpace sp(rule, range);
      Value tol = Value::parse(tol_s);
      CauchyReport cr = cauchy_no_limit_witness(sp, tol);
      // exact sanity on a window past the tail start
      FiniteUltrametricSpace w = sp.window(cr.tail_start, cr.tail_start + 8);
      bool small = true;
      for (size_t i = 0; i < w.size(); ++i)
        for (size_t j = i + 1; j < w.size(); ++j)
          small = small && w.distance(i, j) < tol;
      rep.verdict("tail-window-below-tol", small);
      bool isolated = true;
      for (const auto& [idx, radius] : cr.isolation)
        isolated = isolated && radius.is_positive() && sp.radius(idx) == radius;
      rep.verdict("isolation-positive", isolated);
      rep.outputs()["tail_start"] = cr.tail_start;
      rep.outputs()["tail_diameter"] = cr.tail_diameter.str();
      Json iso = Json::array();
      for (const auto& [idx, radius] : cr.isolation)
        iso.push_back(Json{{"index", idx}, {"infimum", radius.str()}});
      rep.outputs()["isolation"] = std::move(iso);
      rep.exact("tol", tol);
      return 0;
    }));
  }

  try {
    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    app.name("ultra");
    app.parse(argv);
    return exit_code;
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 64;
  } catch (const Error& e) {
    Json j{{"error", e.code()}, {"message", e.what()}, {"details", e.details()}};
    err << j.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ultra::cli
