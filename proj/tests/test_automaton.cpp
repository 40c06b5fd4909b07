#include <catch2/catch_amalgamated.hpp>

#include <synchro/synchro.hpp>

#include "oracles.hpp"

using namespace synchro;

TEST_CASE("make_automaton validates its input") {
    REQUIRE_THROWS_AS(make_automaton(0, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_automaton(2, {{0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_automaton(2, {{0, 2}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_automaton(2, {{0, -2}}), std::invalid_argument);
    Automaton a = make_automaton(2, {{1, kUndefined}}, "x");
    REQUIRE(a.states == 2);
    REQUIRE(a.symbols() == 1);
    REQUIRE(a.name == "x");
    REQUIRE(a.transition(0, 0) == 1);
    REQUIRE(a.transition(1, 0) == kUndefined);
}

TEST_CASE("basic classification") {
    REQUIRE(is_complete(cerny(3)));
    REQUIRE(is_basic(cerny(3)));
    REQUIRE_FALSE(is_complete(record_pfa(4)));
    REQUIRE_FALSE(is_basic(record_pfa(4)));
    REQUIRE(symbol_is_identity({0, 1, 2}));
    REQUIRE_FALSE(symbol_is_identity({0, 1, 0}));
    // duplicate symbol
    REQUIRE_FALSE(is_basic(make_automaton(2, {{1, 0}, {1, 0}})));
    // identity symbol
    REQUIRE_FALSE(is_basic(make_automaton(2, {{0, 1}, {1, 1}})));
}

TEST_CASE("state sets") {
    StateSet s;
    REQUIRE(s.empty());
    s.insert(0);
    s.insert(63);
    REQUIRE(s.size() == 2);
    REQUIRE(s.contains(63));
    REQUIRE_FALSE(s.contains(5));
    REQUIRE(s.lowest() == 0);
    REQUIRE_FALSE(s.is_singleton());

    WideStateSet w = WideStateSet::full(100);
    REQUIRE(w.size() == 100);
    REQUIRE(w.contains(99));
    REQUIRE_FALSE(w.contains(100));

    StateSet f = StateSet::full(6);
    auto states = to_states(f);
    REQUIRE(states == std::vector<int>{0, 1, 2, 3, 4, 5});
    REQUIRE(set_of<1>({3, 1}).size() == 2);
}

TEST_CASE("step blocks on undefined entries and on the empty set") {
    Automaton a = record_pfa(4);  // b undefined on state 0
    StateSet v = StateSet::full(4);
    REQUIRE(step(a, v, 1).empty());
    StateSet sub = set_of<1>({1, 2, 3});
    StateSet img = step(a, sub, 1);
    REQUIRE(to_states(img) == std::vector<int>{0, 2, 3});
    REQUIRE(step(a, StateSet{}, 0).empty());
}

TEST_CASE("apply_word matches set-by-set simulation on random partial automata") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Automaton a = oracle::random_partial(rng, 2 + trial % 7, 1 + trial % 3, 0.25);
        std::uniform_int_distribution<int> len(0, 6);
        std::uniform_int_distribution<int> sym(0, a.symbols() - 1);
        Word w(len(rng));
        for (int& x : w) x = sym(rng);
        auto ref = oracle::run_word(a, oracle::full_set(a), w);
        auto got = apply_word(a, StateSet::full(a.states), w);
        if (!ref) {
            REQUIRE(got.empty());
        } else {
            REQUIRE(to_states(got) == std::vector<int>(ref->begin(), ref->end()));
        }
    }
}

TEST_CASE("is_sync_word") {
    Automaton c3 = cerny(3);
    REQUIRE(is_sync_word(c3, parse_word("baab")));
    REQUIRE_FALSE(is_sync_word(c3, parse_word("ba")));
    REQUIRE_FALSE(is_sync_word(c3, Word{}));
    // wide path: 100 states, one constant symbol
    std::vector<int> constant(100, 42);
    Automaton big = make_automaton(100, {constant});
    REQUIRE(is_sync_word(big, Word{0}));
    Automaton tooBig = make_automaton(129, {std::vector<int>(129, 0)});
    REQUIRE_THROWS_AS(is_sync_word(tooBig, Word{0}), CapacityError);
}

TEST_CASE("word and symbol formatting") {
    REQUIRE(symbol_name(0) == "a");
    REQUIRE(symbol_name(25) == "z");
    REQUIRE(symbol_name(26) == "[26]");
    REQUIRE(word_to_string({0, 1, 2}) == "abc");
    REQUIRE(parse_word("abc") == Word{0, 1, 2});
    REQUIRE(parse_word("a b\tc") == Word{0, 1, 2});
    REQUIRE(parse_word("") == Word{});
    REQUIRE_THROWS_AS(parse_word("aB"), std::invalid_argument);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> len(0, 12), sym(0, 25);
        Word w(len(rng));
        for (int& x : w) x = sym(rng);
        REQUIRE(parse_word(word_to_string(w)) == w);
    }
}
