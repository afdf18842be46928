#pragma once

#include <chrono>

#include "sharpcheck/certify.hpp"
#include "sharpcheck/io.hpp"

namespace sharpcheck {

struct CommandRequest {
  std::string command;
  std::string form = "implicit";
  std::string mode;
  std::optional<double> eps;
  std::optional<Vec> direction;
  std::optional<Vec> point;
  std::optional<double> kappa;
  std::string side = "region";
  bool literal_threshold = false;
  bool strict_criticality = false;
  bool growth_replay = true;
  std::string kind;
  std::string clarke = "elementwise";
  std::string op;
  std::optional<double> delta;
  std::optional<double> rho;
  std::optional<double> radius;
  std::optional<long> samples;
  std::optional<unsigned long long> seed;
  std::string set = "S";
  std::optional<Vec> y, d, w;
};

struct CommandResult {
  Json document;
  int exit = 3;
};

namespace command_detail {

inline const Vec& need(const std::optional<Vec>& v, const char* flag) {
  if (!v) throw InputError(std::string("missing ") + flag);
  return *v;
}

inline NecessaryMode necessary_mode(const std::string& m) {
  if (m.empty() || m == "proximal") return NecessaryMode::proximal;
  if (m == "tangent-distance") return NecessaryMode::tangent_distance;
  throw InputError("unknown --mode '" + m + "'");
}

inline CqKind cq_kind(const std::string& k) {
  for (CqKind c : {CqKind::foscms, CqKind::soscms, CqKind::dirrcq, CqKind::nondeg}) {
    std::string name = to_string(c);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (name == k) return c;
  }
  throw InputError("unknown --kind '" + k + "'");
}

inline OracleKind oracle_kind(const std::string& k) {
  if (k.empty() || k == "tangent") return OracleKind::tangent;
  if (k == "outer2") return OracleKind::outer2;
  if (k == "asymp2") return OracleKind::asymp2;
  throw InputError("unknown oracle --kind '" + k + "'");
}

inline CertificationReport growth_report(const ProblemInstance& p, double delta, long samples,
                                         std::optional<double> kappa) {
  const GrowthEstimate g = growth_constant_estimate(p, delta, samples, p.options.seed);
  CertificationReport r;
  r.check = "verify-growth";
  r.kappa_bound = g.kappa_hat;
  const double threshold = kappa.value_or(0.0);
  const bool ok = kappa ? g.kappa_hat >= threshold : g.kappa_hat > threshold;
  r.verdict = ok ? Verdict::certified : Verdict::violated;
  Witness w;
  w.inequality = "growth";
  w.x = g.witness;
  w.achieved = g.kappa_hat;
  w.threshold = threshold;
  w.passed = ok;
  r.witnesses.push_back(w);
  std::ostringstream os;
  os << g.used << " of " << g.samples << " samples used, delta " << delta;
  r.diag(os.str());
  for (const auto& s : g.diagnostics) r.diag(s);
  return r;
}

}  // namespace command_detail

inline CertificationReport necessary_command(const ProblemInstance& p, const CommandRequest& rq) {
  using namespace command_detail;
  const NecessaryMode mode = necessary_mode(rq.mode);
  const double eps = rq.eps.value_or(p.options.epsilon);
  const std::string& f = rq.form;
  if (f != "implicit" && f != "explicit" && f != "clarke" && f != "nondegenerate")
    throw InputError("unknown --form '" + f + "'");
  if (f != "implicit" && mode != NecessaryMode::proximal)
    throw InputError("--mode tangent-distance is only defined for --form implicit");
  ClarkeMode cm = ClarkeMode::elementwise;
  if (f == "nondegenerate") cm = ClarkeMode::nondegenerate;
  else if (rq.clarke == "convex-subset") cm = ClarkeMode::convex_subset;
  else if (rq.clarke != "elementwise") throw InputError("unknown --clarke-mode '" + rq.clarke + "'");
  if (!rq.direction) {
    if (rq.point) throw InputError("--point requires --direction");
    SweepChecker c = SweepChecker::implicit;
    if (f == "explicit") c = SweepChecker::explicit_m;
    if (f == "clarke") c = SweepChecker::clarke;
    if (f == "nondegenerate") c = SweepChecker::nondegenerate;
    return sweep_necessary(p, eps, mode, c);
  }
  const Vec x = rq.point.value_or(p.xbar);
  const Vec& d = *rq.direction;
  require_dim(x.size(), p.n, "--point");
  require_dim(d.size(), p.n, "--direction");
  if (f == "implicit") return necessary_implicit_check(p, x, d, eps, mode);
  if (f == "explicit") return necessary_explicit_check(p, x, d, eps);
  return necessary_clarke_check(p, x, d, eps, cm);
}

inline CertificationReport sufficient_command(const ProblemInstance& p, const CommandRequest& rq) {
  const std::string mode = rq.mode.empty() ? "point" : rq.mode;
  if (mode == "isolated") {
    CertificationReport r = sufficient_isolated_check(p);
    if (rq.kappa) r.diag("--kappa is not used by the isolated check");
    return r;
  }
  if (mode != "point") throw InputError("unknown --mode '" + mode + "'");
  if (!rq.kappa) throw InputError("missing --kappa");
  SufficientMode side = SufficientMode::region_side;
  if (rq.side == "k") side = SufficientMode::k_side;
  else if (rq.side != "region") throw InputError("unknown --side '" + rq.side + "'");
  SufficientOptions o;
  o.literal_threshold = rq.literal_threshold;
  o.strict_criticality = rq.strict_criticality;
  o.growth_replay = rq.growth_replay;
  return sufficient_point_check(p, *rq.kappa, side, o);
}

inline CertificationReport cq_command(const ProblemInstance& p, const CommandRequest& rq) {
  using namespace command_detail;
  const CqKind k = cq_kind(rq.kind);
  const Vec x = rq.point.value_or(p.xbar);
  const Vec& d = need(rq.direction, "--direction");
  require_dim(x.size(), p.n, "--point");
  require_dim(d.size(), p.n, "--direction");
  const CqResult c = constraint_qualification_check(p, x, d, k);
  CertificationReport r;
  r.check = std::string("cq/") + rq.kind;
  r.verdict = c.holds ? Verdict::satisfied : Verdict::violated;
  CqStatus s;
  s.d = d;
  if (auto cert = mscq_certificate(p, x, d)) s.certificate = *cert;
  s.checks.push_back(c);
  r.cq_status.push_back(s);
  for (const auto& n : c.notes) r.diag(n);
  return r;
}

/// Oracle subcommands; the result member holds the raw estimator output.
inline Json oracle_command(const ProblemInstance& p, const CommandRequest& rq, Verdict& verdict) {
  using namespace command_detail;
  const std::string& op = rq.op;
  const double delta = rq.delta.value_or(p.options.delta);
  const unsigned long long seed = p.options.seed;
  Json res;
  if (op == "growth") {
    const CertificationReport r = growth_report(p, delta, rq.samples.value_or(p.options.samples), rq.kappa);
    verdict = r.verdict;
    Json doc = report_json(p, r);
    doc["check"] = "oracle/growth";
    return doc;
  }
  if (op == "sample-feasible") {
    const FeasibleSample s = sample_feasible(p, delta, rq.samples.value_or(100), seed);
    res["points"] = Json::array();
    for (const Vec& x : s.points) res["points"].push_back(vec_json(x));
    res["proposals"] = s.proposals;
    res["direct_hits"] = s.direct_hits;
    res["diagnostics"] = s.diagnostics;
    verdict = s.points.empty() ? Verdict::inconclusive : Verdict::satisfied;
  } else if (op == "mscq") {
    const Vec x = rq.point.value_or(p.xbar);
    const MscqEstimate e = mscq_modulus_estimate(p, x, need(rq.direction, "--direction"), rq.rho.value_or(p.options.rho),
                                                 delta, rq.samples.value_or(2000), seed);
    res["kappa_hat"] = e.kappa_hat;
    res["divergent"] = e.divergent;
    res["infeasible_samples"] = e.infeasible_samples;
    res["slope"] = e.slope;
    res["witness"] = vec_json(e.witness);
    res["diagnostics"] = e.diagnostics;
    verdict = e.divergent ? Verdict::violated : Verdict::satisfied;
  } else if (op == "distance-lemma") {
    const Vec x = rq.point.value_or(p.xbar);
    const DistanceLemmaOutcome o =
        proximal_distance_check(p.S, x, need(rq.direction, "--direction"), rq.eps.value_or(p.options.epsilon));
    res["pass"] = o.pass;
    res["violating_t"] = o.violating_t;
    res["values"] = Json::array();
    for (const auto& [t, v] : o.values) res["values"].push_back({t, v});
    verdict = o.pass ? Verdict::satisfied : Verdict::violated;
  } else if (op == "dd-probe") {
    const DdProbe o = dd_condition_probe(p, rq.radius.value_or(delta), rq.samples.value_or(2000), seed);
    res["holds_on_box"] = o.holds_on_box;
    res["box_radius"] = o.box_radius;
    res["witness"] = vec_json(o.witness);
    verdict = o.holds_on_box ? Verdict::satisfied : Verdict::violated;
  } else if (op == "membership") {
    if (rq.set != "S" && rq.set != "K") throw InputError("--set must be S or K");
    const BaseSet& s = rq.set == "S" ? p.S : p.K;
    const Vec& y = need(rq.y, "--y");
    const Vec dv = rq.d.value_or(Vec::Zero(s.dim)), wv = rq.w.value_or(Vec::Zero(s.dim));
    const OracleKind k = oracle_kind(rq.kind);
    if (k == OracleKind::tangent && !rq.d) throw InputError("missing --d");
    if (k != OracleKind::tangent && !rq.w) throw InputError("missing --w");
    const OracleOutcome o = membership_by_definition(s, y, dv, wv, k);
    res["verdict"] = to_string(o.verdict);
    res["limit"] = o.limit;
    res["perturbations"] = o.perturbations;
    verdict = o.verdict == OracleVerdict::confirmed  ? Verdict::satisfied
              : o.verdict == OracleVerdict::rejected ? Verdict::violated
                                                     : Verdict::inconclusive;
  } else {
    throw InputError("unknown --op '" + op + "'");
  }
  Json doc;
  doc["check"] = "oracle/" + op;
  doc["verdict"] = to_string(verdict);
  doc["result"] = res;
  return doc;
}

/// Runs one command; the document carries the echo, digest, seed and runtime. Input errors propagate as exceptions.
inline CommandResult run_command(const LoadedProblem& lp, const CommandRequest& rq,
                                 const std::vector<std::string>& echo = {}) {
  const auto start = std::chrono::steady_clock::now();
  ProblemInstance p = lp.instance;
  if (rq.seed) p.options.seed = *rq.seed;
  if (rq.delta) p.options.delta = *rq.delta;
  if (rq.samples) p.options.samples = *rq.samples;
  CommandResult out;
  Verdict v = Verdict::inconclusive;
  if (rq.command == "oracle") {
    out.document = oracle_command(p, rq, v);
  } else {
    CertificationReport r;
    if (rq.command == "verify-growth")
      r = command_detail::growth_report(p, p.options.delta, p.options.samples, rq.kappa);
    else if (rq.command == "check-necessary") r = necessary_command(p, rq);
    else if (rq.command == "check-sufficient") r = sufficient_command(p, rq);
    else if (rq.command == "check-cq") r = cq_command(p, rq);
    else throw InputError("unknown command '" + rq.command + "'");
    v = r.verdict;
    out.document = report_json(p, r);
  }
  out.exit = exit_code(v);
  std::string line;
  for (const auto& a : echo) line += (line.empty() ? "" : " ") + a;
  out.document["command"] = echo;
  out.document["command_line"] = line;
  out.document["digest"] = lp.digest;
  out.document["seed"] = p.options.seed;
  out.document["exit_code"] = out.exit;
  out.document["warnings"] = lp.warnings;
  out.document["runtime_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace sharpcheck
