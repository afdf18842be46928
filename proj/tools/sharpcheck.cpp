#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "sharpcheck/commands.hpp"

using namespace sharpcheck;

namespace {

std::optional<Vec> to_vec(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size()));
}

struct Parsed {
  std::string problem, format = "text";
  std::vector<double> direction, point, y, d, w;
  double eps = 0, kappa = 0, delta = 0, rho = 0, radius = 0;
  long samples = 0;
  unsigned long long seed = 0;
};

void common(CLI::App* sub, Parsed& a) {
  sub->add_option("problem", a.problem, "problem file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--format", a.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
  sub->add_option("--seed", a.seed, "overrides options.seed");
  sub->add_option("--delta", a.delta, "sampling radius");
  sub->add_option("--samples", a.samples, "sample count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order sharp minimum verification"};
  app.require_subcommand(1);
  Parsed a;
  CommandRequest rq;

  auto* growth = app.add_subcommand("verify-growth", "estimate the quadratic growth constant");
  common(growth, a);
  growth->add_option("--kappa", a.kappa, "certify kappa_hat >= kappa instead of kappa_hat > 0");

  auto* nec = app.add_subcommand("check-necessary", "second-order necessary conditions");
  common(nec, a);
  nec->add_option("--form", rq.form)->check(CLI::IsMember({"implicit", "explicit", "clarke", "nondegenerate"}));
  nec->add_option("--mode", rq.mode)->check(CLI::IsMember({"proximal", "tangent-distance"}));
  nec->add_option("--clarke-mode", rq.clarke)->check(CLI::IsMember({"elementwise", "convex-subset"}));
  nec->add_option("--eps", a.eps);
  nec->add_option("--direction", a.direction, "comma separated; omitted means sweep")->delimiter(',');
  nec->add_option("--point", a.point, "comma separated; defaults to xbar")->delimiter(',');

  auto* suf = app.add_subcommand("check-sufficient", "second-order sufficient conditions");
  common(suf, a);
  suf->add_option("--mode", rq.mode)->check(CLI::IsMember({"point", "isolated"}));
  suf->add_option("--kappa", a.kappa);
  suf->add_option("--side", rq.side)->check(CLI::IsMember({"region", "k"}));
  suf->add_flag("--literal-threshold", rq.literal_threshold, "compare against kappa |d|^2");
  suf->add_flag("--strict-criticality", rq.strict_criticality);
  bool no_replay = false;
  suf->add_flag("--no-growth-replay", no_replay);

  auto* cq = app.add_subcommand("check-cq", "constraint qualifications");
  common(cq, a);
  cq->add_option("--kind", rq.kind)->required()->check(CLI::IsMember({"foscms", "soscms", "dirrcq", "nondeg"}));
  cq->add_option("--direction", a.direction)->required()->delimiter(',');
  cq->add_option("--point", a.point)->delimiter(',');

  auto* orc = app.add_subcommand("oracle", "definition-based oracles");
  common(orc, a);
  orc->add_option("--op", rq.op)
      ->required()
      ->check(CLI::IsMember({"growth", "sample-feasible", "mscq", "distance-lemma", "dd-probe", "membership"}));
  orc->add_option("--direction", a.direction)->delimiter(',');
  orc->add_option("--point", a.point)->delimiter(',');
  orc->add_option("--eps", a.eps);
  orc->add_option("--rho", a.rho);
  orc->add_option("--radius", a.radius);
  orc->add_option("--kappa", a.kappa);
  orc->add_option("--set", rq.set)->check(CLI::IsMember({"S", "K"}));
  orc->add_option("--kind", rq.kind)->check(CLI::IsMember({"tangent", "outer2", "asymp2"}));
  orc->add_option("--y", a.y)->delimiter(',');
  orc->add_option("--d", a.d)->delimiter(',');
  orc->add_option("--w", a.w)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  CLI::App* sub = app.get_subcommands().front();
  rq.command = sub->get_name();
  auto given = [&](const char* flag) {
    const CLI::Option* o = sub->get_option_no_throw(flag);
    return o && o->count() > 0;
  };
  rq.direction = to_vec(a.direction);
  rq.point = to_vec(a.point);
  rq.y = to_vec(a.y);
  rq.d = to_vec(a.d);
  rq.w = to_vec(a.w);
  rq.growth_replay = !no_replay;
  if (given("--eps")) rq.eps = a.eps;
  if (given("--kappa")) rq.kappa = a.kappa;
  if (given("--delta")) rq.delta = a.delta;
  if (given("--rho")) rq.rho = a.rho;
  if (given("--radius")) rq.radius = a.radius;
  if (given("--samples")) rq.samples = a.samples;
  if (given("--seed")) rq.seed = a.seed;

  std::vector<std::string> echo{"sharpcheck"};
  for (int i = 1; i < argc; ++i) echo.emplace_back(argv[i]);
  try {
    const LoadedProblem lp = load_problem(a.problem);
    const CommandResult r = run_command(lp, rq, echo);
    std::cout << (a.format == "machine" ? canonical(r.document) + "\n" : render_text(r.document));
    return r.exit;
  } catch (const Error& e) {
    std::cerr << "sharpcheck: " << e.what() << "\n";
    return 3;
  }
}
