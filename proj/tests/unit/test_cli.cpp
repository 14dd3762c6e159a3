#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = devaudit::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSp5 = "singlepeaked a < b < c < d";
const std::string kPlurality3 = "a > b > c; b > a > c; c > b > a";

}  // namespace

TEST_CASE("usage errors") {
  auto r = run({});
  CHECK(r.code == 1);
  CHECK(r.err.find("usage:") != std::string::npos);
  r = run({"no-such-command"});
  CHECK(r.code == 1);
  r = run({"verify-cert", "/nonexistent/file.cert"});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check-frame") {
  auto r = run({"check-frame", data_path("frames/square.frame")});
  CHECK(r.code == 0);
  CHECK(r.out.find("DEV") != std::string::npos);
  r = run({"check-frame", data_path("frames/square_minus_corner.frame")});
  CHECK(r.code == 1);
  CHECK(r.out.find("VIOLATION") != std::string::npos);
  r = run({"check-frame", data_path("frames/square.frame"), "--survivors", "s01 s10"});
  CHECK(r.code == 2);
  CHECK(r.out.find("MISSING-MIDPOINT\ts01\t{1}\t{2}\ts10") != std::string::npos);
}

TEST_CASE("model-check") {
  auto r = run({"model-check", "--rule", data_path("rules/plurality.rule"), "--truth", kPlurality3, "--formula",
                "(o_a & <{3}>(o_b & p_3_b_a))"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("TRUE", 0) == 0);
  r = run({"model-check", "--rule", data_path("rules/plurality.rule"), "--truth", kPlurality3, "--formula",
           "<{3}>o_c"});
  CHECK(r.out.rfind("FALSE", 0) == 0);
  r = run({"model-check", "--frame", data_path("frames/square.frame"), "--valuation", data_path("frames/square.val"),
           "--formula", "<{1}>q"});
  CHECK(r.code == 0);
  CHECK(r.out.find("s01") != std::string::npos);
  CHECK(r.out.find("s11") != std::string::npos);
  r = run({"model-check", "--frame", data_path("frames/square.frame"), "--valuation", data_path("frames/square.val"),
           "--formula", "(p &"});
  CHECK(r.code == 1);
  CHECK(r.err.find("syntax error") != std::string::npos);
}

TEST_CASE("audits") {
  auto r = run({"audit-sp", "--rule", data_path("rules/plurality.rule")});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("WITNESS", 0) == 0);
  r = run({"audit-sp", "--rule", data_path("rules/median5.rule"), "--domain", kSp5});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("CLEAN", 0) == 0);
  r = run({"--format", "json-lines", "audit-group-sp", "--rule", data_path("rules/plurality.rule"), "--max-size", "2"});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("{\"status\":\"WITNESS\"", 0) == 0);
  r = run({"boundary-audit", "--rule", data_path("rules/median5_extended.rule"), "--domain", kSp5});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("BOUNDARY", 0) == 0);
}

TEST_CASE("replay and update safety") {
  const auto witness = data_path("witness/median5.witness");
  auto r = run({"replay", "--rule", data_path("rules/median5.rule"), "--domain", kSp5, "--witness", witness});
  CHECK(r.out.rfind("edge-deleted", 0) == 0);
  CHECK(r.code == 0);
  r = run({"replay", "--rule", data_path("rules/median5_extended.rule"), "--domain", kSp5, "--witness", witness});
  CHECK(r.out.rfind("boundary-witness", 0) == 0);
  CHECK(r.code == 2);
  r = run({"replay", "--rule", data_path("rules/median5_extended.rule"), "--domain", kSp5, "--witness", witness,
           "--survivors", data_path("witness/median5_survivors.txt")});
  CHECK(r.out.rfind("unsafe-update", 0) == 0);
  r = run({"update-safety", "--rule", data_path("rules/median5_extended.rule"), "--domain", kSp5, "--truth",
           "a > b > c > d; b > a > c > d; b > c > a > d; c > b > a > d; d > c > b > a", "--survivors",
           data_path("witness/median5_survivors.txt")});
  CHECK(r.code == 2);
  CHECK(r.out.rfind("UNSAFE", 0) == 0);
}

TEST_CASE("verify-cert") {
  CHECK(run({"verify-cert", data_path("certs/good.cert")}).code == 0);
  auto r = run({"verify-cert", data_path("certs/bad_diamond.cert")});
  CHECK(r.code == 1);
  CHECK(r.err.find("diamond-row") != std::string::npos);
  r = run({"verify-cert", data_path("certs/bad_union.cert")});
  CHECK(r.code == 1);
  CHECK(r.err.find("union-row") != std::string::npos);
}

TEST_CASE("gen-sp, search and gs-report") {
  auto r = run({"gen-sp", "--axis", "a < b < c < d"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);
  const auto a = run({"--seed", "5", "gen-sp", "--axis", "a < b < c", "--sample", "3", "--agents", "2"});
  const auto b = run({"gen-sp", "--axis", "a < b < c", "--sample", "3", "--agents", "2", "--seed", "5"});
  CHECK(a.out == b.out);
  r = run({"search", "non-product-component"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("SAT non-product-component", 0) == 0);
  r = run({"search", "missing-corner-in-dev", "--states", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("UNSAT", 0) == 0);
  CHECK(run({"search", "bogus"}).code == 1);
  r = run({"gs-report", "--rule", data_path("rules/plurality.rule")});
  CHECK(r.out.find("STRATEGY-PROOF\tno") != std::string::npos);
}
