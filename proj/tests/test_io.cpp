#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <synchro/synchro.hpp>

#include "oracles.hpp"

using namespace synchro;

TEST_CASE("read_automaton parses the text format") {
    std::istringstream in(
        "# my machine\n"
        "# extra comment\n"
        "4 2\n"
        "1 2 3 0\n"
        "1 - - 0\n");
    Automaton a = read_automaton(in);
    REQUIRE(a.name == "my machine");
    REQUIRE(a.states == 4);
    REQUIRE(a.symbols() == 2);
    REQUIRE(a.table[0] == std::vector<int>{1, 2, 3, 0});
    REQUIRE(a.table[1] == std::vector<int>{1, kUndefined, kUndefined, 0});
}

TEST_CASE("read_automaton reports line numbers on errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_automaton(in);
    };
    REQUIRE_THROWS_AS(parse(""), ParseError);
    REQUIRE_THROWS_AS(parse("x y\n"), ParseError);
    REQUIRE_THROWS_AS(parse("2 1\n0 2\n"), ParseError);   // target out of range
    REQUIRE_THROWS_AS(parse("2 1\n0\n"), ParseError);     // too few entries
    REQUIRE_THROWS_AS(parse("2 1\n0 1 0\n"), ParseError); // too many entries
    REQUIRE_THROWS_AS(parse("2 2\n0 1\n"), ParseError);   // missing symbol row
    REQUIRE_THROWS_AS(parse("2 1\n0 q\n"), ParseError);   // junk token
    REQUIRE_THROWS_AS(parse("0 1\n"), ParseError);        // no states
    try {
        parse("2 1\n0 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.line == 2);
    }
}

TEST_CASE("write/read round trip preserves automata") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Automaton a = oracle::random_partial(rng, 1 + trial % 9, 1 + trial % 4, 0.3);
        if (trial % 2) a.name = "machine-" + std::to_string(trial);
        std::ostringstream out;
        write_automaton(out, a);
        std::istringstream in(out.str());
        Automaton b = read_automaton(in);
        REQUIRE(a.states == b.states);
        REQUIRE(a.table == b.table);
        REQUIRE(a.name == b.name);
    }
}

TEST_CASE("file helpers") {
    std::string path = "io_test_tmp.txt";
    Automaton a = record_pfa(4);
    write_automaton_file(path, a);
    Automaton b = read_automaton_file(path);
    REQUIRE(b.name == a.name);
    REQUIRE(b.table == a.table);
    std::remove(path.c_str());
    REQUIRE_THROWS(read_automaton_file("does_not_exist_anywhere.txt"));
}

TEST_CASE("to_text and from_text") {
    Automaton a = cerny(3);
    std::string text = to_text(a);
    Automaton b = from_text(text);
    REQUIRE(b.table == a.table);
    REQUIRE(b.name == a.name);
}
