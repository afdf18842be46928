#include <gtest/gtest.h>

#include <fstream>

#include "sharpcheck/commands.hpp"

using namespace sharpcheck;

namespace {

std::string fixture(const std::string& name) { return std::string(SHARPCHECK_FIXTURES) + "/" + name; }

Json read_json(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

Json strip(Json d) {
  for (const char* k : {"runtime_ms", "command", "command_line"}) d.erase(k);
  return d;
}

CommandRequest necessary(const std::string& form) {
  CommandRequest r;
  r.command = "check-necessary";
  r.form = form;
  return r;
}

CommandRequest sufficient(const std::string& mode, std::optional<double> kappa, bool literal = false) {
  CommandRequest r;
  r.command = "check-sufficient";
  r.mode = mode;
  r.kappa = kappa;
  r.literal_threshold = literal;
  return r;
}

const char* kSmall = R"({"n":1,"m":1,"objective":"x1^2","constraints":["x1"],
  "K":{"kind":"interval","lo":"-inf","hi":0},"S":{"kind":"point","point":[0]},"xbar":[0]})";

}  // namespace

TEST(Load, Fixtures) {
  const auto e1 = load_problem(fixture("example1.json"));
  EXPECT_EQ(e1.instance.n, 2);
  EXPECT_NEAR(e1.instance.g_value(e1.instance.xbar)(0), 0.0, 0.0);
  EXPECT_TRUE(e1.instance.feasible(e1.instance.xbar));
  const auto e2 = load_problem(fixture("example2.json"));
  EXPECT_EQ(e2.instance.K.kind, BaseSet::Kind::union_of);
  EXPECT_EQ(e2.instance.m, 2);
  const auto pa = load_problem(fixture("parabola.json"));
  EXPECT_TRUE(std::isinf(pa.instance.K.bounds[0].first));
}

TEST(Load, Rejections) {
  try {
    load_problem(fixture("infeasible.json"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("candidate infeasible"), std::string::npos);
  }
  try {
    load_problem_text("{\"n\": 1,\n  \"m\": oops}");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  Json j = Json::parse(kSmall);
  j["extra"] = 1;
  EXPECT_THROW(load_problem_text(j.dump()), InputError);
  j = Json::parse(kSmall);
  j["K"]["radius"] = 1;
  EXPECT_THROW(load_problem_text(j.dump()), InputError);
  j = Json::parse(kSmall);
  j["xbar"] = {0, 0};
  EXPECT_THROW(load_problem_text(j.dump()), Error);
  j = Json::parse(kSmall);
  j["constraints"] = {"x1", "x1"};
  EXPECT_THROW(load_problem_text(j.dump()), Error);
  j = Json::parse(kSmall);
  j["objective"] = "x3 + 1";
  EXPECT_THROW(load_problem_text(j.dump()), Error);
}

TEST(Emit, CanonicalRoundTripAndStableBytes) {
  const auto lp = load_problem(fixture("example2.json"));
  const auto a = run_command(lp, necessary("implicit"), {"sharpcheck"});
  const auto b = run_command(lp, necessary("implicit"), {"sharpcheck"});
  EXPECT_EQ(canonical(strip(a.document)), canonical(strip(b.document)));
  const std::string bytes = canonical(a.document);
  EXPECT_EQ(bytes, canonical(a.document));
  EXPECT_EQ(Json::parse(bytes), a.document);
  Json edge = {{"b", -0.0}, {"a", 0.1}, {"c", std::numeric_limits<double>::infinity()}};
  EXPECT_EQ(canonical(edge), R"({"a":0.10000000000000001,"b":0,"c":"inf"})");
  const std::string text = render_text(a.document);
  EXPECT_NE(text.find("witness replay:"), std::string::npos);
  EXPECT_NE(text.find("achieved -1"), std::string::npos);
}

TEST(Commands, ExitCodes) {
  const auto e1 = load_problem(fixture("example1.json"));
  const auto e2 = load_problem(fixture("example2.json"));
  const auto pa = load_problem(fixture("parabola.json"));
  CommandRequest r = necessary("implicit");
  r.eps = 0.0;
  const auto a = run_command(e1, r);
  EXPECT_EQ(a.exit, 0);
  EXPECT_NEAR(a.document["kappa_bound"].get<double>(), 1.0, 1e-9);
  const auto b = run_command(e2, necessary("implicit"));
  EXPECT_EQ(b.exit, 1);
  EXPECT_NEAR(b.document["witnesses"][0]["achieved"].get<double>(), -1.0, 1e-9);
  EXPECT_EQ(run_command(pa, sufficient("isolated", 0.9)).exit, 0);
  EXPECT_EQ(run_command(pa, sufficient("point", 1.5)).exit, 2);
  r.mode = "tangent-distance";
  r.form = "explicit";
  EXPECT_THROW(run_command(e1, r), InputError);
  r = CommandRequest{};
  r.command = "nope";
  EXPECT_THROW(run_command(e1, r), InputError);
  for (Verdict v : {Verdict::certified, Verdict::satisfied, Verdict::violated, Verdict::inconclusive,
                    Verdict::hypotheses_not_met}) {
    const int c = exit_code(v);
    EXPECT_TRUE(c >= 0 && c <= 2);
  }
}

TEST(Golden, FixtureReports) {
  struct Case {
    const char* golden;
    const char* problem;
    CommandRequest request;
  };
  CommandRequest imp0 = necessary("implicit");
  imp0.eps = 0.0;
  CommandRequest td = necessary("implicit");
  td.mode = "tangent-distance";
  Vec d(2);
  d << 1, 1;
  td.direction = d;
  const std::vector<Case> cases{
      {"example1_implicit", "example1.json", imp0},
      {"example1_tangent_distance", "example1.json", td},
      {"example2_implicit", "example2.json", necessary("implicit")},
      {"example2_explicit", "example2.json", necessary("explicit")},
      {"parabola_point", "parabola.json", sufficient("point", 0.9)},
      {"parabola_isolated", "parabola.json", sufficient("isolated", std::nullopt)},
      {"parabola_literal", "parabola.json", sufficient("point", 1.5, true)},
  };
  for (const auto& c : cases) {
    const auto out = run_command(load_problem(fixture(c.problem)), c.request);
    EXPECT_EQ(strip(out.document), read_json(fixture(std::string("golden/") + c.golden + ".json"))) << c.golden;
  }
}
