#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sharpcheck/certify.hpp"

namespace sharpcheck {

using Json = nlohmann::json;

namespace io_detail {

inline void only_members(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InputError("unknown member '" + it.key() + "' in " + where);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError("missing member '" + key + "' in " + where);
  return j.at(key);
}

/// A number, or one of the strings "inf", "+inf", "-inf".
inline double real(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError(where + " must be a number or \"inf\"/\"-inf\"");
}

inline Vec vec(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array of numbers");
  Vec v(static_cast<long>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = real(j[i], where);
  return v;
}

inline LinRow row(const Json& j, const std::string& where) {
  only_members(j, {"normal", "offset"}, where);
  return {vec(member(j, "normal", where), where + ".normal"), real(member(j, "offset", where), where + ".offset")};
}

}  // namespace io_detail

inline BaseSet set_from_json(const Json& j, const std::string& where = "set") {
  using namespace io_detail;
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InputError(where + " needs a string member 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "interval") {
    only_members(j, {"kind", "lo", "hi"}, where);
    return BaseSet::interval(real(member(j, "lo", where), where + ".lo"), real(member(j, "hi", where), where + ".hi"));
  }
  if (kind == "box") {
    only_members(j, {"kind", "bounds"}, where);
    std::vector<std::pair<double, double>> b;
    for (const auto& e : member(j, "bounds", where)) {
      if (!e.is_array() || e.size() != 2) throw InputError(where + ".bounds entries must be [lo, hi]");
      b.push_back({real(e[0], where), real(e[1], where)});
    }
    return BaseSet::box(std::move(b));
  }
  if (kind == "halfspace") {
    only_members(j, {"kind", "normal", "offset"}, where);
    return BaseSet::halfspace(vec(member(j, "normal", where), where + ".normal"),
                              real(member(j, "offset", where), where + ".offset"));
  }
  if (kind == "polyhedron") {
    only_members(j, {"kind", "dim", "rows", "equalities"}, where);
    std::vector<LinRow> in, eq;
    for (const auto& r : member(j, "rows", where)) in.push_back(row(r, where + ".rows"));
    if (j.contains("equalities"))
      for (const auto& r : j.at("equalities")) eq.push_back(row(r, where + ".equalities"));
    long n = j.contains("dim") ? j.at("dim").get<long>() : -1;
    if (n < 0) {
      if (!in.empty()) n = in.front().normal.size();
      else if (!eq.empty()) n = eq.front().normal.size();
      else throw InputError(where + ": polyhedron without rows needs 'dim'");
    }
    return BaseSet::polyhedron(n, std::move(in), std::move(eq));
  }
  if (kind == "ball") {
    only_members(j, {"kind", "center", "radius"}, where);
    return BaseSet::ball(vec(member(j, "center", where), where + ".center"),
                         real(member(j, "radius", where), where + ".radius"));
  }
  if (kind == "point") {
    only_members(j, {"kind", "point"}, where);
    return BaseSet::point(vec(member(j, "point", where), where + ".point"));
  }
  if (kind == "finite") {
    only_members(j, {"kind", "points"}, where);
    std::vector<Vec> pts;
    for (const auto& e : member(j, "points", where)) pts.push_back(vec(e, where + ".points"));
    return BaseSet::finite(std::move(pts));
  }
  if (kind == "union" || kind == "product") {
    const std::string key = kind == "union" ? "members" : "factors";
    only_members(j, {"kind", key}, where);
    std::vector<BaseSet> parts;
    const auto& arr = member(j, key, where);
    for (size_t i = 0; i < arr.size(); ++i)
      parts.push_back(set_from_json(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
    return kind == "union" ? BaseSet::union_of(std::move(parts)) : BaseSet::product(std::move(parts));
  }
  throw InputError(where + ": unknown set kind '" + kind + "'");
}

inline Options options_from_json(const Json& j) {
  using namespace io_detail;
  only_members(j, {"epsilon", "delta", "rho", "seed", "tolerance", "level_eps", "samples", "kappa_grid"}, "options");
  Options o;
  if (j.contains("epsilon")) o.epsilon = real(j.at("epsilon"), "options.epsilon");
  if (j.contains("delta")) o.delta = real(j.at("delta"), "options.delta");
  if (j.contains("rho")) o.rho = real(j.at("rho"), "options.rho");
  if (j.contains("seed")) o.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("tolerance")) o.tolerance = real(j.at("tolerance"), "options.tolerance");
  if (j.contains("level_eps")) o.level_eps = real(j.at("level_eps"), "options.level_eps");
  if (j.contains("samples")) o.samples = j.at("samples").get<long>();
  if (j.contains("kappa_grid")) {
    o.kappa_grid.clear();
    for (const auto& e : j.at("kappa_grid")) o.kappa_grid.push_back(real(e, "options.kappa_grid"));
    if (o.kappa_grid.empty()) throw InputError("options.kappa_grid must be non-empty");
    std::sort(o.kappa_grid.begin(), o.kappa_grid.end());
  }
  return o;
}

/// Canonical text: sorted member names, %.17g numbers, -0 printed as 0, infinities as strings, no whitespace.
inline void write_canonical(std::ostream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map ordering: sorted member names
        if (!first) os << ',';
        first = false;
        os << Json(it.key()).dump() << ':';
        write_canonical(os, it.value());
      }
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        write_canonical(os, j[i]);
      }
      os << ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) os << "\"nan\"";
      else if (std::isinf(v)) os << (v > 0 ? "\"inf\"" : "\"-inf\"");
      else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
        os << buf;
      }
      break;
    }
    default: os << j.dump();
  }
}

inline std::string canonical(const Json& j) {
  std::ostringstream os;
  write_canonical(os, j);
  return os.str();
}

/// 64-bit FNV-1a as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

struct LoadedProblem {
  ProblemInstance instance;
  Json document;
  std::string digest;
  std::vector<std::string> warnings;
};

namespace io_detail {

inline std::string line_column(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace io_detail

inline LoadedProblem load_problem_text(const std::string& text) {
  using namespace io_detail;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("parse error at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  try {
    only_members(j, {"n", "m", "objective", "constraints", "K", "S", "xbar", "options"}, "problem");
    const long n = member(j, "n", "problem").get<long>();
    const long m = member(j, "m", "problem").get<long>();
    std::vector<std::string> cons;
    for (const auto& c : member(j, "constraints", "problem")) cons.push_back(c.get<std::string>());
    if (static_cast<long>(cons.size()) != m) throw DimensionError("constraints must list m expressions");
    const Vec xbar = vec(member(j, "xbar", "problem"), "xbar");
    Options o = j.contains("options") ? options_from_json(j.at("options")) : Options{};
    LoadedProblem out{make_problem(n, member(j, "objective", "problem").get<std::string>(), cons,
                                   set_from_json(member(j, "K", "problem"), "K"),
                                   set_from_json(member(j, "S", "problem"), "S"), xbar, o),
                      j, fnv1a_hex(canonical(j)), {}};
    long bad = 0;
    for (const Vec& u : certify_detail::points_of_S(out.instance, out.instance.options.delta, 200, false))
      if (!out.instance.feasible(u)) ++bad;
    if (bad > 0) out.warnings.push_back("S is not contained in the feasible set: " + std::to_string(bad) +
                                        " sampled points of S are infeasible");
    return out;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed problem document: ") + e.what());
  }
}

inline LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_problem_text(ss.str());
}

inline Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(static_cast<double>(v(i)));
  return a;
}

inline Json real_json(double v) { return Json(v); }

/// 0 certified/satisfied, 1 violated, 2 inconclusive or hypotheses-not-met; input errors exit 3.
inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::certified:
    case Verdict::satisfied: return 0;
    case Verdict::violated: return 1;
    case Verdict::inconclusive:
    case Verdict::hypotheses_not_met: return 2;
  }
  return 2;
}

inline Json witness_json(const ProblemInstance& p, const Witness& w) {
  Json j;
  j["inequality"] = w.inequality;
  j["x"] = vec_json(w.x);
  j["d"] = vec_json(w.d);
  j["lam"] = vec_json(w.lam);
  j["w"] = vec_json(w.w);
  j["achieved"] = real_json(w.achieved);
  j["replayed"] = real_json(replay_witness(p, w));
  j["threshold"] = real_json(w.threshold);
  j["passed"] = w.passed;
  j["level_set"] = w.level_set;
  if (w.element >= 0) j["element"] = w.element;
  return j;
}

inline Json report_json(const ProblemInstance& p, const CertificationReport& r) {
  Json j;
  j["check"] = r.check;
  j["verdict"] = to_string(r.verdict);
  j["kappa_bound"] = r.kappa_bound ? real_json(*r.kappa_bound) : Json(nullptr);
  j["strength_gap"] = r.strength_gap;
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back(witness_json(p, w));
  j["cq_status"] = Json::array();
  for (const auto& c : r.cq_status) {
    Json e;
    e["d"] = vec_json(c.d);
    e["certificate"] = c.certificate;
    e["checks"] = Json::array();
    for (const auto& k : c.checks)
      e["checks"].push_back({{"kind", to_string(k.kind)}, {"holds", k.holds}, {"witness", vec_json(k.witness)}});
    j["cq_status"].push_back(e);
  }
  j["duality"] = Json::array();
  for (const auto& d : r.duality)
    j["duality"].push_back({{"element", d.element}, {"primal", real_json(d.primal)}, {"dual", real_json(d.dual)}});
  j["diagnostics"] = r.diagnostics;
  return j;
}

inline std::string number_text(const Json& j) {
  if (j.is_number_float() || j.is_number()) return canonical(j);
  if (j.is_string()) return j.get<std::string>();
  return canonical(j);
}

/// Fixed-layout rendering; numbers use the canonical formatter so both formats carry identical digits.
inline std::string render_text(const Json& doc) {
  std::ostringstream os;
  auto scalar = [&](const char* label, const char* key) {
    if (doc.contains(key)) os << label << ": " << number_text(doc.at(key)) << "\n";
  };
  scalar("command", "command_line");
  scalar("instance digest", "digest");
  scalar("seed", "seed");
  scalar("check", "check");
  scalar("verdict", "verdict");
  scalar("kappa bound", "kappa_bound");
  if (doc.value("strength_gap", false)) os << "strength gap: implicit check rejects, explicit condition holds\n";
  if (doc.contains("witnesses") && !doc.at("witnesses").empty()) {
    os << "witness replay:\n";
    for (const auto& w : doc.at("witnesses")) {
      os << "  " << w.at("inequality").get<std::string>() << "  achieved " << number_text(w.at("achieved"))
         << "  replayed " << number_text(w.at("replayed")) << "  threshold " << number_text(w.at("threshold"))
         << (w.at("passed").get<bool>() ? "  pass" : "  FAIL") << "\n";
      for (const char* k : {"x", "d", "lam", "w"})
        if (!w.at(k).empty()) os << "    " << k << " = " << canonical(w.at(k)) << "\n";
    }
  }
  if (doc.contains("cq_status"))
    for (const auto& c : doc.at("cq_status")) {
      os << "cq at d = " << canonical(c.at("d")) << ": "
         << (c.at("certificate").get<std::string>().empty() ? "MSCQ not certified" : c.at("certificate").get<std::string>())
         << "\n";
      for (const auto& k : c.at("checks"))
        os << "  " << k.at("kind").get<std::string>() << (k.at("holds").get<bool>() ? " holds" : " fails") << "\n";
    }
  if (doc.contains("duality"))
    for (const auto& d : doc.at("duality"))
      os << "duality " << d.at("element").get<std::string>() << ": primal " << number_text(d.at("primal"))
         << "  dual " << number_text(d.at("dual")) << "\n";
  static const std::set<std::string> shown{"command_line", "command", "digest", "seed", "check", "verdict",
                                           "kappa_bound", "strength_gap", "witnesses", "cq_status", "duality",
                                           "diagnostics", "warnings", "runtime_ms"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!shown.count(it.key())) os << it.key() << ": " << number_text(it.value()) << "\n";
  for (const char* k : {"warnings", "diagnostics"})
    if (doc.contains(k))
      for (const auto& d : doc.at(k)) os << (std::string(k) == "warnings" ? "warning: " : "note: ") << d.get<std::string>() << "\n";
  scalar("runtime (ms)", "runtime_ms");
  return os.str();
}

}  // namespace sharpcheck
