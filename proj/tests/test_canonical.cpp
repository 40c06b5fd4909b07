#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include <synchro/synchro.hpp>

#include "oracles.hpp"

using namespace synchro;

namespace {

/// Relabel states by perm and optionally shuffle the symbol order.
Automaton relabel(const Automaton& a, const std::vector<int>& perm,
                  const std::vector<int>& symOrder) {
    const int n = a.states;
    std::vector<std::vector<int>> table;
    for (int sym : symOrder) {
        std::vector<int> row(n);
        for (int q = 0; q < n; ++q) {
            int t = a.table[sym][q];
            row[perm[q]] = t == kUndefined ? kUndefined : perm[t];
        }
        table.push_back(std::move(row));
    }
    return make_automaton(n, std::move(table), a.name);
}

}  // namespace

TEST_CASE("symbol and automaton keys") {
    REQUIRE(symbol_key({1, 0, kUndefined}) == std::string("\x01\x00\x03", 3));
    Automaton a = record_pfa(4);
    Automaton swapped = make_automaton(4, {a.table[2], a.table[0], a.table[1]});
    REQUIRE(automaton_key(a) == automaton_key(swapped));
    // Relabeling states is visible to automaton_key but not canonical_key.
    std::vector<int> perm{1, 0, 2, 3};
    Automaton moved = relabel(a, perm, {0, 1, 2});
    REQUIRE(automaton_key(a) != automaton_key(moved));
    REQUIRE(canonical_key(a) == canonical_key(moved));
}

TEST_CASE("canonical key is invariant under every relabeling") {
    Automaton a = cerny(4);
    std::string expect = canonical_key(a);
    std::vector<int> perm{0, 1, 2, 3};
    do {
        REQUIRE(canonical_key(relabel(a, perm, {0, 1})) == expect);
        REQUIRE(canonical_key(relabel(a, perm, {1, 0})) == expect);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("canonical key on random automata") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 80; ++trial) {
        int n = 2 + trial % 5;
        int m = 1 + trial % 3;
        Automaton a = oracle::random_partial(rng, n, m, 0.2);
        std::vector<int> perm(n), symOrder(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::iota(symOrder.begin(), symOrder.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::shuffle(symOrder.begin(), symOrder.end(), rng);
        Automaton b = relabel(a, perm, symOrder);
        REQUIRE(canonical_key(a) == canonical_key(b));
        // The canonical form is a member of the class with the class key.
        Automaton cf = canonical_form(a);
        REQUIRE(canonical_key(cf) == canonical_key(a));
        REQUIRE(automaton_key(cf) == canonical_key(a));
        Automaton cf2 = canonical_form(cf);
        REQUIRE(cf2.table == cf.table);
    }
}

TEST_CASE("canonical keys separate non-isomorphic automata") {
    Automaton a = cerny(3);
    Automaton b = make_automaton(3, {{1, 2, 0}, {0, 0, 0}});
    REQUIRE(canonical_key(a) != canonical_key(b));
    REQUIRE(canonical_key(cerny(4)) != canonical_key(record_pfa(4)));
}

TEST_CASE("capacity guard on canonicalization") {
    std::vector<int> constant(11, 0);
    Automaton big = make_automaton(11, {constant});
    REQUIRE_THROWS_AS(canonical_key(big), CapacityError);
    REQUIRE_THROWS_AS(canonical_form(big), CapacityError);
}

TEST_CASE("minimal conjugate of a single symbol") {
    REQUIRE(min_conjugate_symbol({0, 1, 2}) == std::vector<int>{0, 1, 2});
    REQUIRE(min_conjugate_symbol({1, 2, 0}) == std::vector<int>{1, 2, 0});
    REQUIRE(min_conjugate_symbol({1, 0, 2}) == std::vector<int>{0, 2, 1});
    REQUIRE(min_conjugate_symbol({0, 0, 0}) == std::vector<int>{0, 0, 0});
    REQUIRE(min_conjugate_symbol({kUndefined, 0}) == std::vector<int>{1, kUndefined});

    std::mt19937 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 5;
        std::vector<int> row(n);
        for (int& t : row) t = static_cast<int>(rng() % n);
        std::vector<int> best = min_conjugate_symbol(row);
        // Enumerate every conjugate directly and compare keys.
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::string bestKey = symbol_key(best);
        bool member = false;
        do {
            std::vector<int> conj(n);
            for (int q = 0; q < n; ++q) conj[perm[q]] = perm[row[q]];
            REQUIRE(bestKey <= symbol_key(conj));
            if (conj == best) member = true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        REQUIRE(member);
        REQUIRE(min_conjugate_symbol(best) == best);
    }
}
