#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace synchro {

/// Transition value used for undefined entries of a partial map.
inline constexpr int kUndefined = -1;

/// Thrown when an input exceeds a hard implementation limit (state count,
/// permutation blow-up, ...). Distinct from invalid arguments.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic finite automaton over states 0..states-1, possibly partial.
/// table[sym][q] is the successor of q under symbol sym, or kUndefined.
/// No initial or accepting states; only the transition structure matters here.
struct Automaton {
    int states = 0;
    std::vector<std::vector<int>> table;
    std::string name;

    int symbols() const { return static_cast<int>(table.size()); }

    int transition(int q, int sym) const { return table[sym][q]; }
};

/// A word is a sequence of symbol indices into Automaton::table.
using Word = std::vector<int>;

inline Automaton make_automaton(int states, std::vector<std::vector<int>> table,
                                std::string name = {}) {
    if (states < 1)
        throw std::invalid_argument("automaton needs at least one state");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != states)
            throw std::invalid_argument("symbol row size does not match state count");
        for (int t : row)
            if (t != kUndefined && (t < 0 || t >= states))
                throw std::invalid_argument("transition target out of range");
    }
    return Automaton{states, std::move(table), std::move(name)};
}

inline bool is_complete(const Automaton& a) {
    for (const auto& row : a.table)
        for (int t : row)
            if (t == kUndefined) return false;
    return true;
}

inline bool symbol_is_identity(const std::vector<int>& row) {
    for (int q = 0; q < static_cast<int>(row.size()); ++q)
        if (row[q] != q) return false;
    return true;
}

/// Basic: complete, no identity symbol, no two equal symbols.
inline bool is_basic(const Automaton& a) {
    if (!is_complete(a)) return false;
    for (int i = 0; i < a.symbols(); ++i) {
        if (symbol_is_identity(a.table[i])) return false;
        for (int j = i + 1; j < a.symbols(); ++j)
            if (a.table[i] == a.table[j]) return false;
    }
    return true;
}

/// Fixed-capacity state set backed by Words 64-bit limbs. The empty set is
/// representable and means "blocked" when produced by a partial step.
template <unsigned Words>
struct BasicStateSet {
    static constexpr int capacity = 64 * static_cast<int>(Words);

    std::array<std::uint64_t, Words> bits{};

    static BasicStateSet full(int n) {
        BasicStateSet s;
        for (int q = 0; q < n; ++q) s.insert(q);
        return s;
    }

    void insert(int q) { bits[q >> 6] |= std::uint64_t{1} << (q & 63); }

    bool contains(int q) const {
        return (bits[q >> 6] >> (q & 63)) & 1u;
    }

    int size() const {
        int c = 0;
        for (auto w : bits) c += std::popcount(w);
        return c;
    }

    bool empty() const {
        for (auto w : bits)
            if (w) return false;
        return true;
    }

    bool is_singleton() const { return size() == 1; }

    /// Smallest member; call only on non-empty sets.
    int lowest() const {
        for (unsigned i = 0; i < Words; ++i)
            if (bits[i]) return 64 * static_cast<int>(i) + std::countr_zero(bits[i]);
        return -1;
    }

    friend bool operator==(const BasicStateSet&, const BasicStateSet&) = default;

    friend bool operator<(const BasicStateSet& a, const BasicStateSet& b) {
        for (unsigned i = Words; i-- > 0;)
            if (a.bits[i] != b.bits[i]) return a.bits[i] < b.bits[i];
        return false;
    }
};

using StateSet = BasicStateSet<1>;      // up to 64 states, one machine word
using WideStateSet = BasicStateSet<2>;  // fallback up to 128 states

template <unsigned Words>
struct StateSetHash {
    std::size_t operator()(const BasicStateSet<Words>& s) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto w : s.bits) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xbf58476d1ce4e5b9ull;
        }
        return static_cast<std::size_t>(h);
    }
};

template <unsigned Words>
std::vector<int> to_states(const BasicStateSet<Words>& s) {
    std::vector<int> out;
    for (unsigned i = 0; i < Words; ++i) {
        std::uint64_t w = s.bits[i];
        while (w) {
            out.push_back(64 * static_cast<int>(i) + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

template <unsigned Words>
BasicStateSet<Words> set_of(const std::vector<int>& states) {
    BasicStateSet<Words> s;
    for (int q : states) s.insert(q);
    return s;
}

/// One move of the power automaton: the image of v under sym, or the empty
/// set if sym is undefined on some member of v. step({}, sym) is {}.
template <unsigned Words>
BasicStateSet<Words> step(const Automaton& a, const BasicStateSet<Words>& v, int sym) {
    BasicStateSet<Words> out;
    const auto& row = a.table[sym];
    for (unsigned i = 0; i < Words; ++i) {
        std::uint64_t w = v.bits[i];
        while (w) {
            int q = 64 * static_cast<int>(i) + std::countr_zero(w);
            w &= w - 1;
            int t = row[q];
            if (t == kUndefined) return BasicStateSet<Words>{};
            out.insert(t);
        }
    }
    return out;
}

template <unsigned Words>
BasicStateSet<Words> apply_word(const Automaton& a, BasicStateSet<Words> v, const Word& w) {
    for (int sym : w) v = step(a, v, sym);
    return v;
}

namespace detail {

template <unsigned Words>
bool is_sync_word_impl(const Automaton& a, const Word& w) {
    auto v = apply_word(a, BasicStateSet<Words>::full(a.states), w);
    return v.is_singleton();
}

}  // namespace detail

/// True iff w sends the full state set to a single state without ever using
/// an undefined transition (careful synchronization for partial automata).
inline bool is_sync_word(const Automaton& a, const Word& w) {
    if (a.states <= StateSet::capacity) return detail::is_sync_word_impl<1>(a, w);
    if (a.states <= WideStateSet::capacity) return detail::is_sync_word_impl<2>(a, w);
    throw CapacityError("is_sync_word: more than 128 states");
}

/// Symbols are printed a, b, c, ... in table order; indices past 'z' fall
/// back to a bracketed number.
inline std::string symbol_name(int sym) {
    if (sym >= 0 && sym < 26) return std::string(1, static_cast<char>('a' + sym));
    return "[" + std::to_string(sym) + "]";
}

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (int sym : w) s += symbol_name(sym);
    return s;
}

/// Inverse of word_to_string for plain letter words.
inline Word parse_word(const std::string& text) {
    Word w;
    for (char c : text) {
        if (c >= 'a' && c <= 'z') w.push_back(c - 'a');
        else if (c == ' ' || c == '\t') continue;
        else throw std::invalid_argument("unexpected character in word: " + std::string(1, c));
    }
    return w;
}

}  // namespace synchro
