#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "densitylab/cli.hpp"
#include "densitylab/numeric.hpp"

using namespace densitylab;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

Rational rational_of(const Json& j) {
  return make_rational(Integer(j["num"].get<std::string>()), Integer(j["den"].get<std::string>()));
}

// Every {num, den, decimal} object must carry the rounded shadow of its value.
void check_shadows(const Json& j) {
  if (j.is_object()) {
    if (j.contains("num") && j.contains("den") && j.contains("decimal")) {
      CHECK(j["decimal"].get<double>() == decimal_value(rational_of(j)));
      return;
    }
    for (const auto& [k, v] : j.items()) check_shadows(v);
  } else if (j.is_array()) {
    for (const auto& v : j) check_shadows(v);
  }
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("density of the block set") {
    auto r = run({"density", "blocks(dexp)", "--horizon", "1048576", "--tail", "1024"});
    REQUIRE(r.code == kExitOk);
    auto j = Json::parse(r.out);
    CHECK(j["schema"] == "densitylab/1");
    CHECK(j["command"] == "density");
    CHECK(j["config"]["horizon"] == "1048576");
    CHECK(j["config"]["tail"] == "1024");
    CHECK(rational_of(j["result"]["density"]["upper"]) == Rational(65812, 131071));
    CHECK(rational_of(j["result"]["density"]["lower"]) == Rational(92, 21845));
    check_shadows(j);
  }

  TEST_CASE("csv layout") {
    auto r = run({"density", "periodic(2;0)", "--horizon", "100", "--format", "csv"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "n,numerator,denominator,decimal");
    CHECK(first == "1,0,1,0");
    auto s = run({"suite", "--format", "csv"});
    CHECK(s.out.rfind("item,i,n,numerator,denominator,decimal\n1,1,4,3,4,0.75\n", 0) == 0);
  }

  TEST_CASE("levy and witness") {
    auto r = run({"levy", "qswap"});
    REQUIRE(r.code == kExitOk);
    auto j = Json::parse(r.out);
    CHECK(j["result"]["defect"]["classification"]["hint"] == "NonLevyLikely");
    check_shadows(j);

    auto w = run({"witness", "qswap", "--horizon", "4096", "--tail", "100"});
    REQUIRE(w.code == kExitOk);
    auto jw = Json::parse(w.out);
    CHECK(jw["result"]["found"] == true);
    CHECK(jw["result"]["certificate"]["subsequence"] == "explicit(127,511,2047)");
    CHECK(rational_of(jw["result"]["certificate"]["gap"]) == Rational(1024, 2047));

    auto none = run({"witness", "id"});
    CHECK(none.code == kExitOk);
    CHECK(Json::parse(none.out)["result"]["found"] == false);
  }

  TEST_CASE("remaining subcommands produce reports") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"statlim", "pair(periodic(2;1),periodic(2;0))", "--horizon", "20000"},
             {"displacement", "qswap", "periodic(3;1)"},
             {"measure", "mix(1/2: sublim(dexp(6)), 1/2: combo(dexp(6)))", "periodic(4;1,2,3)"},
             {"pair", "periodic(3;0)", "periodic(3;1)", "--horizon", "20000"},
             {"equal", "periodic(2;0)", "diff(periodic(2;0),finite(2,4,6))"},
             {"suite"}}) {
      auto r = run(args);
      CAPTURE(args[0]);
      CHECK(r.code == kExitOk);
      auto j = Json::parse(r.out);
      CHECK(j["command"] == args[0]);
      check_shadows(j);
    }
    auto eq = Json::parse(run({"equal", "periodic(2;0)", "diff(periodic(2;0),finite(2,4,6))"}).out);
    CHECK(eq["result"]["equal_measure"]["equivalent_likely"] == true);
    auto mu = Json::parse(run({"measure", "combo(dexp(6))", "blocks(dexp)"}).out);
    CHECK(mu["result"]["measure"]["verdict"] == "Value");
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == kExitInput);
    CHECK(run({"bogus"}).code == kExitInput);
    auto bad = run({"density", "union(full"});
    CHECK(bad.code == kExitInput);
    CHECK(bad.err.find("position 10") != std::string::npos);
    CHECK(run({"density", "full", "--tail", "100", "--horizon", "100"}).code == kExitInput);
    CHECK(run({"density", "full", "--tol", "0"}).code == kExitInput);
    CHECK(run({"density", "full", "--format", "xml"}).code == kExitInput);
    CHECK(run({"density", "full", "--horizon", "1000", "--budget", "999"}).code == kExitInput);
    CHECK(run({"pair", "finite(1,2)", "finite(5)"}).code == kExitInput);
    auto budget = run({"displacement", "qswap", "periodic(2;0)", "--seq", "explicit(20000000)"});
    CHECK(budget.code == kExitBudget);
    CHECK(budget.err.find("20000000") != std::string::npos);
  }

  TEST_CASE("help names the mathematical anchor") {
    for (const auto& [cmd, anchor] : std::vector<std::pair<std::string, std::string>>{
             {"density", "asymptotic density"},
             {"levy", "Levy group"},
             {"statlim", "Statistical convergence"},
             {"displacement", "(A(n) - (pi A)(n))/n"},
             {"measure", "2 lim A(2n)/(2n) - lim A(n)/n"},
             {"pair", "Interlaced pairing"},
             {"witness", "{k : pi(k) > k}"},
             {"equal", "Equal-measure"},
             {"suite", "2^(2^i)"}}) {
      auto r = run({cmd, "--help"});
      CAPTURE(cmd);
      CHECK(r.code == kExitOk);
      CHECK(r.out.find(anchor) != std::string::npos);
    }
  }

  TEST_CASE("output is deterministic") {
    std::vector<std::string> args{"levy", "comp(qswap,pair(periodic(2;1),periodic(2;0)))", "--horizon", "20000"};
    CHECK(run(args).out == run(args).out);
    CHECK(run({"suite"}).out == run({"suite"}).out);
  }
}
