#pragma once

#include <algorithm>
#include <numeric>
#include <string>

#include "automaton.hpp"

namespace synchro {

namespace detail {

/// Byte string of one symbol table under a state relabeling; undefined maps
/// to n so it sorts after every state.
inline std::string permuted_symbol_key(const std::vector<int>& row, const std::vector<int>& perm,
                                       const std::vector<int>& inv) {
    const int n = static_cast<int>(row.size());
    std::string key(n, '\0');
    for (int q = 0; q < n; ++q) {
        int t = row[inv[q]];
        key[q] = static_cast<char>(t == kUndefined ? n : perm[t]);
    }
    return key;
}

}  // namespace detail

/// Key of a symbol table as-is (identity relabeling).
inline std::string symbol_key(const std::vector<int>& row) {
    const int n = static_cast<int>(row.size());
    std::string key(n, '\0');
    for (int q = 0; q < n; ++q) key[q] = static_cast<char>(row[q] == kUndefined ? n : row[q]);
    return key;
}

/// Key of an automaton as-is: per-symbol keys, sorted so symbol order does
/// not matter. Distinguishes automata that differ by state relabeling.
inline std::string automaton_key(const Automaton& a) {
    std::vector<std::string> keys;
    keys.reserve(a.symbols());
    for (const auto& row : a.table) keys.push_back(symbol_key(row));
    std::sort(keys.begin(), keys.end());
    std::string out;
    for (const auto& k : keys) out += k;
    return out;
}

/// Isomorphism-invariant key: minimize, over all state relabelings, the
/// concatenation of the sorted per-symbol keys. Symbol order is irrelevant,
/// so automata differing only by renaming states or permuting symbols get
/// equal keys. Exponential in n; capped to keep accidental misuse loud.
inline std::string canonical_key(const Automaton& a) {
    if (a.states > 10) throw CapacityError("canonical_key: more than 10 states");
    const int n = a.states;
    const int m = a.symbols();
    std::vector<int> perm(n), inv(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    std::vector<std::string> keys(m);
    do {
        for (int q = 0; q < n; ++q) inv[perm[q]] = q;
        for (int sym = 0; sym < m; ++sym)
            keys[sym] = detail::permuted_symbol_key(a.table[sym], perm, inv);
        std::sort(keys.begin(), keys.end());
        std::string cand;
        cand.reserve(static_cast<std::size_t>(n) * m);
        for (const auto& k : keys) cand += k;
        if (best.empty() || cand < best) best = cand;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Canonical representative of the isomorphism class (name preserved).
inline Automaton canonical_form(const Automaton& a) {
    if (a.states > 10) throw CapacityError("canonical_form: more than 10 states");
    std::string key = canonical_key(a);
    const int n = a.states;
    const int m = a.symbols();
    Automaton out;
    out.states = n;
    out.name = a.name;
    out.table.assign(m, std::vector<int>(n));
    for (int sym = 0; sym < m; ++sym)
        for (int q = 0; q < n; ++q) {
            int t = key[static_cast<std::size_t>(sym) * n + q];
            out.table[sym][q] = t == n ? kUndefined : t;
        }
    return out;
}

/// Lexicographically smallest conjugate of a single total symbol table;
/// used to fix the first symbol of a search up to isomorphism.
inline std::vector<int> min_conjugate_symbol(const std::vector<int>& row) {
    const int n = static_cast<int>(row.size());
    std::vector<int> perm(n), inv(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string bestKey;
    do {
        for (int q = 0; q < n; ++q) inv[perm[q]] = q;
        std::string key = detail::permuted_symbol_key(row, perm, inv);
        if (bestKey.empty() || key < bestKey) bestKey = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<int> out(n);
    for (int q = 0; q < n; ++q) out[q] = bestKey[q] == n ? kUndefined : bestKey[q];
    return out;
}

}  // namespace synchro
