#pragma once

#include <optional>
#include <unordered_set>

#include "analysis.hpp"
#include "automaton.hpp"
#include "rewrite.hpp"

namespace synchro {

/// Cyclic automaton with one shift symbol a and one selective symbol b
/// (identity except 0 b = 1). Shortest synchronizing length (n-1)^2.
inline Automaton cerny(int n) {
    if (n < 2) throw std::invalid_argument("cerny: n must be at least 2");
    std::vector<int> a(n), b(n);
    for (int q = 0; q < n; ++q) {
        a[q] = (q + 1) % n;
        b[q] = q;
    }
    b[0] = 1;
    return make_automaton(n, {std::move(a), std::move(b)}, "cerny-" + std::to_string(n));
}

/// Partial automata attaining the maximal shortest careful synchronization
/// length on n = 4, 5, 6 states (10, 21 and 37).
inline Automaton record_pfa(int n) {
    const int U = kUndefined;
    switch (n) {
        case 4:
            return make_automaton(4,
                                  {{1, 1, 2, 3},
                                   {U, 2, 3, 0},
                                   {1, U, 3, 0}},
                                  "record-pfa-4");
        case 5:
            return make_automaton(5,
                                  {{0, 0, 2, 3, 4},
                                   {1, U, 2, 3, 4},
                                   {U, 2, 0, 1, 4},
                                   {U, 0, 3, U, 4},
                                   {U, 0, U, 2, 3},
                                   {U, 0, U, 4, U}},
                                  "record-pfa-5");
        case 6:
            return make_automaton(6,
                                  {{0, 0, 2, 3, 4, 5},
                                   {2, 0, 1, 3, 4, 5},
                                   {U, 3, U, 0, 2, 5},
                                   {U, 0, U, 4, U, 5},
                                   {U, 0, U, U, 3, 4},
                                   {U, 0, U, U, 5, U}},
                                  "record-pfa-6");
        default:
            throw std::invalid_argument("record_pfa: tables exist for n = 4, 5, 6 only");
    }
}

/// Symbol indices of the exponential-length family.
enum ExpPfaSymbol : int { sym_s = 0, sym_r = 1, sym_c = 2 };

/// The 3k-state family with blocks A_i, B_i, C_i (i = 1..k, 1-based):
///   s sends all of block i to C_i for i <= h and to A_i for i > h,
///   r realizes one rewrite step of the h-rule system in the window
///     (A_i r undefined and B_i r = A_i for i <= h; A_{h+1} r = B_{h+1},
///      B_{h+1} r undefined, C_{h+1} r = B_h; identity above the window),
///   c shifts every block cyclically by one.
/// Optional padding adds states on which r, c are undefined and s maps to
/// C_1; they change the state count without lowering the growth rate.
struct ExpPfa {
    int k = 0;
    int h = 2;
    int pad = 0;
    Automaton automaton;

    int a_state(int i) const { return i - 1; }          // i is 1-based
    int b_state(int i) const { return k + i - 1; }
    int c_state(int i) const { return 2 * k + i - 1; }

    std::string state_name(int q) const {
        if (q < k) return "A" + std::to_string(q + 1);
        if (q < 2 * k) return "B" + std::to_string(q - k + 1);
        if (q < 3 * k) return "C" + std::to_string(q - 2 * k + 1);
        return "pad" + std::to_string(q - 3 * k + 1);
    }

    /// S(u): the states picked per position by a string over {A, B, C}.
    std::vector<int> string_states(const std::string& u) const {
        if (static_cast<int>(u.size()) != k)
            throw std::invalid_argument("string length must equal k");
        std::vector<int> out;
        for (int i = 1; i <= k; ++i) {
            switch (u[i - 1]) {
                case 'A': out.push_back(a_state(i)); break;
                case 'B': out.push_back(b_state(i)); break;
                case 'C': out.push_back(c_state(i)); break;
                default: throw std::invalid_argument("string must be over A, B, C");
            }
        }
        return out;
    }
};

inline ExpPfa make_exp_pfa(int k, int h = 2, int pad = 0) {
    if (h < 2) throw std::invalid_argument("exp_pfa: h must be at least 2");
    if (k < h + 1) throw std::invalid_argument("exp_pfa: k must be at least h + 1");
    if (pad < 0 || pad > 2) throw std::invalid_argument("exp_pfa: pad must be 0, 1 or 2");
    ExpPfa e;
    e.k = k;
    e.h = h;
    e.pad = pad;
    const int n = 3 * k + pad;
    const int U = kUndefined;
    std::vector<int> s(n, U), r(n, U), c(n, U);
    for (int i = 1; i <= k; ++i) {
        int A = i - 1, B = k + i - 1, C = 2 * k + i - 1;
        int target = i <= h ? C : A;
        s[A] = s[B] = s[C] = target;
        if (i <= h) {
            r[B] = A;
            r[C] = C;
        } else if (i == h + 1) {
            r[A] = B;
            r[C] = k + h - 1;  // C_{h+1} r = B_h
        } else {
            r[A] = A;
            r[B] = B;
            r[C] = C;
        }
        int j = i % k + 1;
        c[A] = j - 1;
        c[B] = k + j - 1;
        c[C] = 2 * k + j - 1;
    }
    // Pads join the settled set S(C^h A^(k-h)) after one s, so every word
    // that carefully synchronizes the unpadded automaton from there still
    // works.
    for (int p = 0; p < pad; ++p) s[3 * k + p] = 2 * k;  // C_1
    std::string name = "exp-pfa-k" + std::to_string(k) + "-h" + std::to_string(h);
    if (pad) name += "-pad" + std::to_string(pad);
    e.automaton = make_automaton(n, {std::move(s), std::move(r), std::move(c)}, name);
    return e;
}

inline Automaton exp_pfa(int k, int h = 2, int pad = 0) {
    return make_exp_pfa(k, h, pad).automaton;
}

/// Translate an h = 2 derivation into a word over {s, r, c}: a step with its
/// window starting at 1-based position p becomes c^(k-p+1) r c^(p-1), except
/// the front CCA step which becomes r c^k. Runs of c are emitted literally,
/// so every step contributes exactly k of them.
inline Word trace_to_word(int k, const std::vector<TracePair>& trace) {
    Word out;
    for (const auto& step : trace) {
        if (step.rule < 0 || step.rule > 2)
            throw std::invalid_argument("trace_to_word: expected a rule of the h = 2 system");
        int i = step.rule == 2 ? 0 : k - step.pos;
        if (i < 0 || i > k)
            throw std::invalid_argument("trace_to_word: step position outside the string");
        out.insert(out.end(), i, sym_c);
        out.push_back(sym_r);
        out.insert(out.end(), k - i, sym_c);
    }
    return out;
}

/// Optional peephole pass: fuse consecutive runs of c modulo the cycle
/// length. Off by default everywhere; the literal form keeps the c-count
/// of every step divisible by k.
inline Word fuse_cycle_runs(const Word& w, int k) {
    Word out;
    long long run = 0;
    auto flush = [&] {
        out.insert(out.end(), static_cast<std::size_t>(run % k), sym_c);
        run = 0;
    };
    for (int sym : w) {
        if (sym == sym_c) {
            ++run;
        } else {
            flush();
            out.push_back(sym);
        }
    }
    flush();
    return out;
}

/// Carefully synchronizing word (s w c r)^(k-1) s for the h = 2 family,
/// where w replays the minimal derivation. Ends in the sink C_2.
inline Word theorem3_word(int k) {
    Word w = trace_to_word(k, rewrite_trace(k));
    Word out;
    for (int rep = 0; rep < k - 1; ++rep) {
        out.push_back(sym_s);
        out.insert(out.end(), w.begin(), w.end());
        out.push_back(sym_c);
        out.push_back(sym_r);
    }
    out.push_back(sym_s);
    return out;
}

/// Table of the composite symbol q -> q . w; undefined wherever any factor
/// is undefined along the way.
inline std::vector<int> compose_symbol(const Automaton& a, const Word& w) {
    if (w.empty()) throw std::invalid_argument("compose_symbol: empty word");
    std::vector<int> row(a.states);
    for (int q = 0; q < a.states; ++q) {
        int t = q;
        for (int sym : w) {
            t = a.table[sym][t];
            if (t == kUndefined) break;
        }
        row[q] = t;
    }
    return row;
}

/// Same family presented over the symbols (s, c, rc); rc is undefined
/// exactly where r is. On this presentation the states A_{h+2}..A_k are
/// passive: s fixes them and both other symbols shift them equally.
inline Automaton exp_pfa_scrc(int k, int h = 2) {
    Automaton base = exp_pfa(k, h);
    std::vector<int> s = base.table[sym_s];
    std::vector<int> c = base.table[sym_c];
    std::vector<int> rc = compose_symbol(base, {sym_r, sym_c});
    return make_automaton(base.states, {std::move(s), std::move(c), std::move(rc)},
                          "exp-pfa-scrc-k" + std::to_string(k) + "-h" + std::to_string(h));
}

/// 0-based states A_{h+2}..A_k of the (s, c, rc) presentation.
inline std::vector<int> exp_pfa_passive_states(int k, int h = 2) {
    std::vector<int> out;
    for (int i = h + 2; i <= k; ++i) out.push_back(i - 1);
    return out;
}

/// Input contract of the two-symbol reduction:
///   1. start_symbol s is complete and every symbol is defined on Q s^settle,
///   2. s is the identity on the passive set Q',
///   3. all non-s symbols agree on Q' (undefined matching undefined).
struct ReductionSpec {
    Automaton source;
    int start_symbol = 0;
    int settle = 0;
    std::vector<int> passive;
};

/// Smallest p such that every symbol is defined on Q s^p, if any.
inline std::optional<int> compute_settle(const Automaton& a, int s) {
    if (s < 0 || s >= a.symbols()) throw std::invalid_argument("compute_settle: bad symbol");
    for (int q = 0; q < a.states; ++q)
        if (a.table[s][q] == kUndefined) return std::nullopt;
    if (a.states > WideStateSet::capacity)
        throw CapacityError("compute_settle: more than 128 states");
    auto all_defined = [&](const WideStateSet& v) {
        for (int sym = 0; sym < a.symbols(); ++sym)
            for (int q : to_states(v))
                if (a.table[sym][q] == kUndefined) return false;
        return true;
    };
    std::unordered_set<WideStateSet, StateSetHash<2>> seen;
    WideStateSet v = WideStateSet::full(a.states);
    for (int p = 0;; ++p) {
        if (all_defined(v)) return p;
        if (!seen.insert(v).second) return std::nullopt;  // cycled without success
        v = step(a, v, s);
    }
}

inline void validate_reduction(const ReductionSpec& spec) {
    const Automaton& a = spec.source;
    const int m = a.symbols();
    if (m < 3) throw std::invalid_argument("reduction: source needs at least three symbols");
    if (spec.start_symbol < 0 || spec.start_symbol >= m)
        throw std::invalid_argument("reduction: start symbol out of range");
    if (spec.settle < 0) throw std::invalid_argument("reduction: settle must be non-negative");
    const auto& s = a.table[spec.start_symbol];
    for (int q = 0; q < a.states; ++q)
        if (s[q] == kUndefined)
            throw std::invalid_argument("reduction condition 1: symbol s must be complete");
    std::vector<char> in_passive(a.states, 0);
    for (int q : spec.passive) {
        if (q < 0 || q >= a.states)
            throw std::invalid_argument("reduction: passive state out of range");
        if (in_passive[q]) throw std::invalid_argument("reduction: duplicate passive state");
        in_passive[q] = 1;
    }
    if (a.states > WideStateSet::capacity)
        throw CapacityError("reduction: more than 128 source states");
    WideStateSet v = WideStateSet::full(a.states);
    for (int i = 0; i < spec.settle; ++i) v = step(a, v, spec.start_symbol);
    for (int sym = 0; sym < m; ++sym)
        for (int q : to_states(v))
            if (a.table[sym][q] == kUndefined)
                throw std::invalid_argument("reduction condition 1: symbol " +
                                            symbol_name(sym) + " undefined on Q s^p");
    for (int q : spec.passive) {
        if (s[q] != q)
            throw std::invalid_argument("reduction condition 2: s must fix passive state " +
                                        std::to_string(q));
        int ref = kUndefined - 1;
        for (int sym = 0; sym < m; ++sym) {
            if (sym == spec.start_symbol) continue;
            if (ref == kUndefined - 1) ref = a.table[sym][q];
            else if (a.table[sym][q] != ref)
                throw std::invalid_argument(
                    "reduction condition 3: symbols disagree on passive state " +
                    std::to_string(q));
        }
    }
}

/// Grid automaton of the reduction: columns are source states (passive ones
/// last), rows 1..m-1 cycle under a, and b jumps back to the top row acting
/// as the row's symbol.
struct TwoSymbolReduction {
    Automaton automaton;
    std::vector<int> column;            // source state -> column
    std::vector<int> source_of_column;  // column -> source state
    int rows = 0;                       // m - 1
    int active_columns = 0;             // n' = n - |Q'|

    int top_state(int j) const { return j; }

    int grid_state(int i, int j) const {  // row i in 1..rows
        if (i == 1) return j;
        return static_cast<int>(column.size()) + (i - 2) * active_columns + j;
    }

    std::string state_name(int q) const {
        const int n = static_cast<int>(column.size());
        if (q < n) return "P1," + std::to_string(q + 1);
        int i = 2 + (q - n) / active_columns;
        int j = (q - n) % active_columns;
        return "P" + std::to_string(i) + "," + std::to_string(j + 1);
    }
};

inline TwoSymbolReduction build_two_symbol_reduction(const ReductionSpec& spec) {
    validate_reduction(spec);
    const Automaton& src = spec.source;
    const int n = src.states;
    const int m = src.symbols();

    TwoSymbolReduction red;
    red.rows = m - 1;
    red.column.assign(n, -1);
    std::vector<char> in_passive(n, 0);
    for (int q : spec.passive) in_passive[q] = 1;
    for (int q = 0; q < n; ++q)
        if (!in_passive[q]) {
            red.column[q] = static_cast<int>(red.source_of_column.size());
            red.source_of_column.push_back(q);
        }
    red.active_columns = static_cast<int>(red.source_of_column.size());
    for (int q = 0; q < n; ++q)
        if (in_passive[q]) {
            red.column[q] = static_cast<int>(red.source_of_column.size());
            red.source_of_column.push_back(q);
        }

    std::vector<int> non_s;
    for (int sym = 0; sym < m; ++sym)
        if (sym != spec.start_symbol) non_s.push_back(sym);

    const int total = n + red.active_columns * (m - 2);
    const int U = kUndefined;
    std::vector<int> a(total, U), b(total, U);
    const auto& s_row = src.table[spec.start_symbol];
    for (int j = 0; j < n; ++j) {
        int q = red.source_of_column[j];
        if (j < red.active_columns) {
            a[red.top_state(j)] = red.rows >= 2 ? red.grid_state(2, j)
                                                : red.top_state(red.column[s_row[q]]);
        } else {
            a[red.top_state(j)] = red.top_state(j);  // s is the identity on Q'
        }
        int t = src.table[non_s[0]][q];
        b[red.top_state(j)] = t == U ? U : red.top_state(red.column[t]);
    }
    for (int i = 2; i <= red.rows; ++i) {
        for (int j = 0; j < red.active_columns; ++j) {
            int q = red.source_of_column[j];
            a[red.grid_state(i, j)] = i < red.rows
                                          ? red.grid_state(i + 1, j)
                                          : red.top_state(red.column[s_row[q]]);
            int t = src.table[non_s[i - 1]][q];
            b[red.grid_state(i, j)] = t == U ? U : red.top_state(red.column[t]);
        }
    }
    std::string name = src.name.empty() ? std::string{} : src.name + "-2sym";
    red.automaton = make_automaton(total, {std::move(a), std::move(b)}, name);
    return red;
}

inline Automaton reduce_to_two_symbols(const ReductionSpec& spec) {
    return build_two_symbol_reduction(spec).automaton;
}

/// psi(s) = a^(m-1), psi(a_i) = a^(i-1) b for the i-th non-s symbol.
inline Word psi_word(const ReductionSpec& spec, const Word& w) {
    const int m = spec.source.symbols();
    std::vector<int> rank(m, -1);
    int next = 1;
    for (int sym = 0; sym < m; ++sym)
        if (sym != spec.start_symbol) rank[sym] = next++;
    Word out;
    for (int sym : w) {
        if (sym == spec.start_symbol) {
            out.insert(out.end(), m - 1, 0);
        } else {
            out.insert(out.end(), rank.at(sym) - 1, 0);
            out.push_back(1);
        }
    }
    return out;
}

/// a^((m-1) p) b psi(w): carefully synchronizes the reduction whenever w
/// carefully synchronizes the source.
inline Word reduction_sync_word(const ReductionSpec& spec, const Word& w) {
    Word out(static_cast<std::size_t>(spec.source.symbols() - 1) * spec.settle, 0);
    out.push_back(1);
    Word tail = psi_word(spec, w);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

/// Two-symbol member of the exponential family: 6k states over (s, r, c)
/// with an empty passive set, or 5k + 3 over (s, c, rc) with the passive
/// set A_4..A_k (indices shift with h). Padding adds up to four states on
/// which b is undefined and a enters the C_1 column.
inline Automaton exp_pfa_two_symbol(int k, int h = 2, bool passive_a4k = false, int pad = 0) {
    if (pad < 0 || pad > 4)
        throw std::invalid_argument("exp_pfa_two_symbol: pad must be between 0 and 4");
    ReductionSpec spec;
    spec.start_symbol = 0;
    spec.settle = 1;
    if (passive_a4k) {
        spec.source = exp_pfa_scrc(k, h);
        spec.passive = exp_pfa_passive_states(k, h);
    } else {
        spec.source = exp_pfa(k, h);
    }
    TwoSymbolReduction red = build_two_symbol_reduction(spec);
    Automaton out = red.automaton;
    if (pad) {
        int c1_top = red.top_state(red.column[2 * k]);  // column of C_1
        for (int p = 0; p < pad; ++p) {
            out.table[0].push_back(c1_top);
            out.table[1].push_back(kUndefined);
            ++out.states;
        }
    }
    out.name = "exp-pfa-2sym-k" + std::to_string(k) + "-h" + std::to_string(h) +
               (passive_a4k ? "-qa4k" : "-qempty");
    if (pad) out.name += "-pad" + std::to_string(pad);
    return out;
}

}  // namespace synchro
