#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "support.hpp"
#include "toposkit/etcs.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/internal.hpp"
#include "toposkit/sites.hpp"

using toposkit::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  for (auto& a : args) {
    if (a.find('.') != std::string::npos && a.find('(') == std::string::npos && a[0] != '(' && a[0] != '-') {
      a = fixture(a);
    }
  }
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string without_timing(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.starts_with("timing:") || line.find("\"timing_ms\"") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

const std::vector<std::vector<std::string>> kCommands = {
    {"omega", "arrow.fc"},
    {"verify-classifier", "z2.fc"},
    {"is-sheaf", "bad.fp", "canonical(sierpinski)"},
    {"topologies", "arrow.fc"},
    {"lt-ops", "z2.fc"},
    {"sheafify", "bad.fp", "canonical(sierpinski)"},
    {"frame", "sierpinski.fs"},
    {"sober", "sierpinski.fs"},
    {"recover-locale", "sierpinski.fs"},
    {"etale", "bad.fp"},
    {"points", "z2.fc", "--max-size", "4"},
    {"triple", "geom.fw", "collapse"},
    {"verify-gm", "broken"},
    {"classify-lex", "geom.fw", "yoneda_square"},
    {"check-group", "groups.fa", "s3"},
    {"check-id", "groups.fa", "s3", "(* x y) = (* y x)"},
    {"check-field", "rings.fa", "z4", "--variant", "both"},
    {"etcs", "audit", "--corpus", "audit.fw", "z2sets"},
};

}  // namespace

TEST(Cli, OmegaOfArrow) {
  auto r = call({"omega", "arrow.fc"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sizes: [2, 3]"), std::string::npos);
  EXPECT_NE(r.out.find("truth:"), std::string::npos);
}

TEST(Cli, VerifyClassifierZ2) {
  auto r = call({"verify-classifier", "z2.fc"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, IsSheafFailure) {
  auto r = call({"is-sheaf", "bad.fp", "canonical(sierpinski)"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("witness: non-unique amalgamation"), std::string::npos) << r.out;
  // the library agrees
  auto w = load("bad.fp");
  EXPECT_FALSE(toposkit::is_sheaf(*w.presheaf("bad"), w.topology("canonical(sierpinski)")));
}

TEST(Cli, ReportShape) {
  auto r = call({"omega", "arrow.fc"});
  EXPECT_TRUE(r.out.starts_with("command: omega\ninput: "));
  const auto last = r.out.rfind("\ntiming: ");
  ASSERT_NE(last, std::string::npos);
  EXPECT_EQ(r.out.find('\n', last + 1), r.out.size() - 1);
  EXPECT_NE(r.out.find("status: ok\n"), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (const auto& cmd : kCommands) {
    auto a = call(cmd), b = call(cmd);
    EXPECT_EQ(a.code, b.code) << cmd[0];
    EXPECT_EQ(without_timing(a.out), without_timing(b.out)) << cmd[0];
    auto args = cmd;
    args.insert(args.begin(), "--json");
    auto c = call(args), d = call(args);
    EXPECT_EQ(without_timing(c.out), without_timing(d.out)) << cmd[0];
  }
}

TEST(Cli, JsonMirrorsReport) {
  for (const auto& cmd : kCommands) {
    auto text = call(cmd);
    auto args = cmd;
    args.insert(args.begin(), "--json");
    auto r = call(args);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(r.code, text.code) << cmd[0];
    EXPECT_EQ(j["status"] == "ok", r.code == 0) << cmd[0];
    EXPECT_TRUE(j.contains("timing_ms"));
    EXPECT_EQ(j["witnesses"].empty(), r.code == 0) << cmd[0];
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({"frame", "sierpinski.fs"}).code, 0);
  EXPECT_EQ(call({"check-field", "rings.fa", "z4"}).code, 1);
  EXPECT_EQ(call({"omega", "missing.fc"}).code, 2);
  EXPECT_EQ(call({"omega", "arrow.fc", "stray"}).code, 2);
  EXPECT_EQ(call({"no-such-command"}).code, 2);
  EXPECT_EQ(call({"--max-enum", "5", "verify-classifier", "square.fc"}).code, 2);
  auto r = call({"--json", "omega", "missing.fc"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, MalformedFileReportsPosition) {
  auto path = std::filesystem::temp_directory_path() / "toposkit_bad.fc";
  {
    std::ofstream f(path);
    f << "category c\nobject a\nmorphism f : a -> b\n";
  }
  std::ostringstream out, err;
  const int code = run({"validate", path.string()}, out, err);
  EXPECT_EQ(code, 2);
  EXPECT_NE((out.str() + err.str()).find(":3:"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, EnvironmentBoundAndFlag) {
  ::setenv("TOPOSKIT_MAX_ENUM", "5", 1);
  EXPECT_EQ(call({"verify-classifier", "square.fc"}).code, 2);
  EXPECT_EQ(call({"--max-enum", "100000000", "verify-classifier", "terminal.fc"}).code, 0);
  ::unsetenv("TOPOSKIT_MAX_ENUM");
  EXPECT_EQ(call({"verify-classifier", "terminal.fc"}).code, 0);
}

// Every exit-1 witness is confirmed by the library checker.
TEST(Cli, WitnessesRecheck) {
  using namespace toposkit;
  {
    EXPECT_EQ(call({"check-id", "groups.fa", "s3", "(* x y) = (* y x)"}).code, 1);
    auto w = load("groups.fa");
    EXPECT_FALSE(check_identity(parse_statement("(* x y) = (* y x)"), w.group("s3")).holds);
  }
  {
    EXPECT_EQ(call({"check-field", "rings.fa", "z4"}).code, 1);
    auto w = load("rings.fa");
    auto v = check_field(w.ring("z4"));
    EXPECT_FALSE(v.field);
    EXPECT_EQ(v.element, 2);
  }
  {
    auto r = call({"etcs", "audit", "--corpus", "audit.fw", "z2sets"});
    EXPECT_EQ(r.code, 1);
    auto w = load("audit.fw");
    const auto& t = w.corpus("z2sets");
    auto c = check_well_pointed(t);
    EXPECT_EQ(c.verdict, Verdict::Fail);
    EXPECT_TRUE(recheck(c, t));
    EXPECT_NE(r.out.find(c.summary), std::string::npos);
  }
  {
    EXPECT_EQ(call({"verify-gm", "broken"}).code, 1);
    EXPECT_FALSE(verify_geometric(broken_pair()).ok);
  }
  {
    auto r = call({"etcs", "audit", "--corpus", "audit.fw", "sets", "--checks", "nno"});
    EXPECT_EQ(r.code, 1);
    auto w = load("audit.fw");
    const auto& t = w.corpus("sets");
    auto c = check_nno_candidate(t, t.candidates.at(0));
    EXPECT_EQ(c.verdict, Verdict::Refuted);
    EXPECT_TRUE(recheck(c, t));
  }
}
