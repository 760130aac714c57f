#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "session.hpp"

using stmtoda::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string session_file(const std::string& name) { return slurp(std::string(STMTODA_SESSIONS_DIR) + "/" + name); }

json run(const std::string& text, std::uint64_t cap = stm::kDefaultEnumerationCap) {
  stmtoda::RunOptions opts;
  opts.max_enumerate = cap;
  return stmtoda::run_session(stmtoda::parse_session(text), opts);
}

const json& result(const json& report, const std::string& command) {
  for (const json& r : report["results"])
    if (r["command"] == command) return r;
  throw std::runtime_error("no result for " + command);
}

std::pair<int, int> parse_failure(const std::string& text) {
  try {
    stmtoda::parse_session(text);
  } catch (const stmtoda::ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

const char* kHeader = "ring p=2 m=4\nmodule k = [1]\nmodule M = [2]\n";

}  // namespace

namespace stmtest {

TEST(Cli, GhostSessionReportsD2AndProperInclusion) {
  json rep = run(session_file("ghost_resolution.toda"));
  const json& dr = result(rep, "dr kappa 2");
  EXPECT_EQ(dr["elements"], json::parse("[[1,1]]"));
  EXPECT_EQ(dr["basis_labels"], json::parse(R"(["mu(1)[0->0]","mu(x)[1->0]"])"));
  const json& forms = result(rep, "drforms kappa 2");
  EXPECT_TRUE(forms["flags"]["second_proper"].get<bool>());
  EXPECT_TRUE(forms["flags"]["all_equal"].get<bool>());
  EXPECT_EQ(forms["forms"]["middle"]["elements"], json::parse("[[1,1]]"));
  EXPECT_EQ(forms["forms"]["outer"]["elements"].size(), 2u);
  EXPECT_FALSE(result(rep, "sparse k 2 4")["sparse"].get<bool>());
}

TEST(Cli, C3SessionReportsMinusIdentity) {
  json rep = run(session_file("c3_negative.toda"));
  for (const char* cmd : {"bracket fc q i q", "bracket cc q i q", "bracket ff q i q"}) {
    const json& b = result(rep, cmd);
    EXPECT_EQ(b["elements"], json::parse("[[2]]")) << cmd;
    EXPECT_EQ(b["indeterminacy_rank"], 0);
    EXPECT_FALSE(b.contains("empty_reason"));
  }
  EXPECT_EQ(result(rep, "bracket fc q i q")["fillers"].size(), 1u);
  EXPECT_TRUE(result(rep, "heller i q i")["distinguished"].get<bool>());
  EXPECT_FALSE(result(rep, "heller i q ni")["distinguished"].get<bool>());
  EXPECT_NE(stmtoda::render_text(rep).find("elements {-mu(1)}"), std::string::npos);
}

TEST(Cli, SnapshotsMatch) {
  for (const char* name : {"ghost_resolution", "c3_negative"}) {
    const std::string text = stmtoda::render_text(run(session_file(std::string(name) + ".toda")));
    EXPECT_EQ(text, session_file(std::string(name) + ".expected")) << name;
  }
}

TEST(Cli, JsonRoundTripRendersIdentically) {
  for (const char* name : {"ghost_resolution.toda", "c3_negative.toda"}) {
    json rep = run(session_file(name));
    json back = json::parse(rep.dump(2));
    EXPECT_EQ(back, rep);
    EXPECT_EQ(stmtoda::render_text(back), stmtoda::render_text(rep)) << name;
  }
}

TEST(Cli, OutputIsDeterministic) {
  const std::string text = session_file("ghost_resolution.toda") + "selftest heller 12\n";
  stmtoda::RunOptions opts;
  opts.seed = 7;
  const std::string a = stmtoda::run_session(stmtoda::parse_session(text), opts).dump();
  const std::string b = stmtoda::run_session(stmtoda::parse_session(text), opts).dump();
  EXPECT_EQ(a, b);
}

TEST(Cli, SelftestAgreesWithComparison) {
  stmtoda::RunOptions opts;
  opts.seed = 3;
  json rep = stmtoda::run_session(stmtoda::parse_session("ring p=3 m=3\nselftest heller 20\n"), opts);
  const json& r = rep["results"][0];
  EXPECT_EQ(r["agree"], 20);
  EXPECT_TRUE(r["disagreements"].empty());
}

TEST(Cli, ParseErrorsCarryLineAndColumn) {
  const std::string h = kHeader;
  EXPECT_EQ(parse_failure("module k = [1]\n"), std::make_pair(1, 1));
  EXPECT_EQ(parse_failure("ring p=4 m=2\n"), std::make_pair(1, 8));
  EXPECT_EQ(parse_failure(h + "module k = [2]\n"), std::make_pair(4, 8));
  EXPECT_EQ(parse_failure(h + "module N = [5]\n"), std::make_pair(4, 12));
  EXPECT_EQ(parse_failure(h + "map f: k -> Q = mu(1)\n"), std::make_pair(4, 13));
  EXPECT_EQ(parse_failure(h + "map f: k -> M = mu(y)\n"), std::make_pair(4, 20));
  EXPECT_EQ(parse_failure(h + "map f: k -> M = blocks [[mu(1), 0]]\n"), std::make_pair(4, 24));
  EXPECT_EQ(parse_failure(h + "sthom k X\n"), std::make_pair(4, 9));
  EXPECT_EQ(parse_failure(h + "bracket xx a b c\n"), std::make_pair(4, 9));
  EXPECT_EQ(parse_failure(h + "page 2\n"), std::make_pair(4, 1));
  EXPECT_EQ(parse_failure(h + "adams M gen=k\n"), std::make_pair(4, 1));
  EXPECT_EQ(parse_failure(h + "frobnicate\n"), std::make_pair(4, 1));
  EXPECT_EQ(parse_failure(h + "sthom k M $\n"), std::make_pair(4, 11));
}

TEST(Cli, NonLinearMatrixIsRejectedAtLoad) {
  const std::string h = kHeader;
  EXPECT_EQ(parse_failure(h + "map f: M -> M = matrix [[1,1],[0,1]]\n"), std::make_pair(4, 17));
  EXPECT_EQ(parse_failure(h + "map f: M -> M = matrix [[1,0]]\n"), std::make_pair(4, 24));
  EXPECT_EQ(parse_failure(h + "module N = matrix [[1,0],[0,0]]\n"), std::make_pair(4, 12));
  EXPECT_NO_THROW(stmtoda::parse_session(h + "map f: M -> M = matrix [[1,0],[1,1]]\nmodule N = matrix [[0,1],[0,0]]\n"));
}

TEST(Cli, MapSyntaxesAgree) {
  json rep = run(std::string(kHeader) +
                 "module P = [1,3]\n"
                 "map a: k -> M = mu(x)\n"
                 "map b: k -> M = blocks [[mu(x)]]\n"
                 "map c: k -> M = matrix [[0],[1]]\n"
                 "map d: P -> M = blocks [[mu(x), mu(1) + mu(x) - mu(x)]]\n");
  const json& objs = rep["objects"];
  EXPECT_EQ(objs[3]["coords"], objs[4]["coords"]);
  EXPECT_EQ(objs[3]["coords"], objs[5]["coords"]);
  EXPECT_EQ(objs[6]["coords"], json::parse("[1,1]"));
}

TEST(Cli, EngineErrorsNameTheCommand) {
  const std::string h = kHeader;
  try {
    run(h + "map a: k -> M = mu(x)\nheller a a a\n");
    FAIL() << "expected an engine error";
  } catch (const stmtoda::CommandError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_NE(std::string(e.what()).find("heller a a a"), std::string::npos);
  }
  try {
    run(session_file("ghost_resolution.toda"), 1);
    FAIL() << "expected an enumeration overflow";
  } catch (const stmtoda::CommandError& e) {
    EXPECT_NE(std::string(e.what()).find("--max-enumerate 1"), std::string::npos);
  }
}

}  // namespace stmtest
