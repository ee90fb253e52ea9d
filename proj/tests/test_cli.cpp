#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/script.hpp"

using namespace mwk;

TEST_CASE("element literals and equality commands") {
    RunOutput out = run_script(
        "field F5 = GF(5)\n"
        "elem h0 : KMW(0, F5) = 2 + eta*[-1]\n"
        "eval h0\n"
        "elem lhs : KMW(1, F5) = [2] + [3]\n"
        "elem rhs : KMW(1, F5) = [2*3] - eta*[2]*[3]\n"
        "equal lhs rhs\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 2);
    CHECK(out.results[0].result == "2 + eta*[4]");
    CHECK(out.results[1].result == "true");
    CHECK(exit_code(out) == 0);
}

TEST_CASE("zero is not a form: domain error, exit code 1") {
    RunOutput out = run_script(
        "field F5 = GF(5)\n"
        "gw bad : F5 = <0>\n");
    CHECK(out.error == ErrorKind::Domain);
    CHECK(exit_code(out) == 1);
    REQUIRE(out.results.size() == 1);
    CHECK(out.results[0].error == ErrorKind::Domain);
}

TEST_CASE("undecidable comparison: capability error, exit code 2") {
    RunOutput out = run_script(
        "field Q = QQ\n"
        "ext E = Q[x]/(x^2 - 2)\n"
        "gw g : E = <x>\n"
        "gw one : E = <1>\n"
        "equal g one\n");
    CHECK(out.error == ErrorKind::Capability);
    CHECK(exit_code(out) == 2);
}

TEST_CASE("syntax errors carry positions") {
    RunOutput out = run_script("field F5 = GF(5)\nfrobnicate x\n");
    CHECK(out.error == ErrorKind::Syntax);
    CHECK(exit_code(out) == 1);
}

TEST_CASE("degree formula through the transfer command") {
    RunOutput out = run_script(
        "field F3 = GF(3)\n"
        "ext E = F3[x]/(x^2 + 1)\n"
        "elem one : KMW(0, E) = 1\n"
        "transfer one from E with w as tr\n"
        "elem hh : KMW(0, F3) = 2 + eta*[-1]\n"
        "equal tr hh\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 2);
    // the transfer of <1> along a degree-2 extension is h
    CHECK(out.results[1].result == "true");
}

TEST_CASE("residue, specialization, and rebinding") {
    RunOutput out = run_script(
        "field F5 = GF(5)\n"
        "field K = F5(t)\n"
        "elem a : KMW(2, K) = [t]*[t-1]\n"
        "residue a at (t) as r\n"
        "eval r\n"
        "specialize a at (t-2) as sp\n"
        "eval sp\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 4);
    CHECK(out.results[0].result == out.results[1].result);
    CHECK(out.results[0].result.find("nu(t)") != std::string::npos);
}

TEST_CASE("reciprocity command reports per-place transfers") {
    RunOutput out = run_script(
        "field F5 = GF(5)\n"
        "reciprocity [t^2-2]*dt over F5\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 1);
    const CommandResult& r = out.results[0];
    CHECK(r.result == "0");
    bool ok_line = false;
    for (const auto& [k, v] : r.invariants)
        if (k == "ok" && v == "true") ok_line = true;
    CHECK(ok_line);
    CHECK(r.perPlace.size() >= 2);
}

TEST_CASE("divisor pipeline: tdiv, tdeg, pb1") {
    RunOutput out = run_script(
        "field F5 = GF(5)\n"
        "field K = F5(t)\n"
        "elem s : KMW(1, K) = [t*t-2]\n"
        "tdiv s on P1(K, -2) as D\n"
        "tdeg D\n"
        "pb1 D\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 3);
    CHECK(out.results[0].result.find("point") != std::string::npos);
    bool parity = false;
    for (const auto& [k, v] : out.results[2].invariants)
        if (k == "parity" && v == "even") parity = true;
    CHECK(parity);
}

TEST_CASE("rules-suite command runs a filtered criterion") {
    RunOutput out = run_script("rules-suite gw-tables\n");
    REQUIRE(out.error == ErrorKind::None);
    REQUIRE(out.results.size() == 1);
    CHECK(out.results[0].result == "pass");
    REQUIRE(out.results[0].invariants.size() == 1);
    CHECK(out.results[0].invariants[0].first == "gw-tables");
}

TEST_CASE("JSON rendering is stable and schema-shaped") {
    const char* src =
        "field F5 = GF(5)\n"
        "elem h0 : KMW(0, F5) = 2 + eta*[-1]\n"
        "eval h0\n";
    std::string a = render_json(run_script(src));
    std::string b = render_json(run_script(src));
    CHECK(a == b);
    CHECK(a.find("\"command\": \"eval\"") != std::string::npos);
    CHECK(a.find("\"result\": \"2 + eta*[4]\"") != std::string::npos);
    CHECK(a.find("\"error\": \"none\"") != std::string::npos);
}

TEST_CASE("interpreter keeps bindings across lines") {
    Interpreter in;
    CHECK(!in.execute_line("field F7 = GF(7)", 1).has_value());
    CHECK(!in.execute_line("elem a : KMW(1, F7) = [3]", 2).has_value());
    auto r = in.execute_line("eval a", 3);
    REQUIRE(r.has_value());
    CHECK(r->result == "[3]");
    CHECK_THROWS_AS(in.execute_line("eval nope", 4), ScriptError);
}
