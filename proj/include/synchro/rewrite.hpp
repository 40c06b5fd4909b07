#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "automaton.hpp"

namespace synchro {

using u128 = unsigned __int128;

/// Fibonacci with fib(1) = fib(2) = 1. Capped at 180, beyond which the sums
/// used in string weights no longer fit 128 bits.
inline constexpr int kFibMax = 180;

inline u128 fib(int i) {
    if (i < 0) throw std::invalid_argument("fib: negative index");
    if (i > kFibMax) throw std::overflow_error("fib: index above 180 overflows 128 bits");
    u128 a = 0, b = 1;
    for (int j = 0; j < i; ++j) {
        u128 c = a + b;
        a = b;
        b = c;
    }
    return a;
}

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s += static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

struct RewriteRule {
    std::string lhs, rhs;
};

/// Rules C^i B^(h-i) A -> C^i A^(h-i) B for i = 0..h. For h = 2 this is
/// BBA -> AAB, CBA -> CAB, CCA -> CCB, in that order.
struct RewriteSystem {
    int h = 2;
    std::vector<RewriteRule> rules;
};

inline RewriteSystem make_rewrite_system(int h = 2) {
    if (h < 2) throw std::invalid_argument("rewrite system needs h >= 2");
    RewriteSystem sys;
    sys.h = h;
    for (int i = 0; i <= h; ++i)
        sys.rules.push_back({std::string(i, 'C') + std::string(h - i, 'B') + "A",
                             std::string(i, 'C') + std::string(h - i, 'A') + "B"});
    return sys;
}

struct RewriteStep {
    int pos;   // 0-based start of the matched left-hand side
    int rule;  // index into RewriteSystem::rules
    std::string result;
};

/// All single-step successors, position-major then rule-major, so the order
/// is deterministic.
inline std::vector<RewriteStep> rewrite_successors(const RewriteSystem& sys,
                                                   const std::string& u) {
    std::vector<RewriteStep> out;
    for (int pos = 0; pos + sys.h < static_cast<int>(u.size()); ++pos) {
        for (int r = 0; r < static_cast<int>(sys.rules.size()); ++r) {
            const auto& rule = sys.rules[r];
            if (u.compare(pos, rule.lhs.size(), rule.lhs) != 0) continue;
            std::string v = u;
            v.replace(pos, rule.rhs.size(), rule.rhs);
            out.push_back({pos, r, std::move(v)});
        }
    }
    return out;
}

/// Weight of a string for the h = 2 system: sum over 1-based positions i
/// carrying B of fib(i) - 1. Every rewrite step inside the two-leading-C
/// class increases it by exactly one.
inline u128 weight(const std::string& u) {
    u128 w = 0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i)
        if (u[i] == 'B') w += fib(i + 1) - 1;
    return w;
}

/// Strings reachable from C^h A^(k-h) keep their C block fixed at the front,
/// so a class member is the suffix over {A, B} encoded as k-h bits
/// (1-based position h+1+j <-> bit j, B = 1).
inline std::string class_string(int k, int h, std::uint32_t bits) {
    std::string u(k, 'A');
    for (int j = 0; j < h; ++j) u[j] = 'C';
    for (int j = 0; j < k - h; ++j)
        if ((bits >> j) & 1u) u[h + j] = 'B';
    return u;
}

/// Exact minimal number of rewrite steps from C^h A^(k-h) to the first
/// string ending in B, by BFS over the 2^(k-h) class members.
inline long long min_steps_to_terminal(const RewriteSystem& sys, int k) {
    const int h = sys.h;
    if (k < h + 1) throw std::invalid_argument("min_steps_to_terminal: k must exceed h");
    const int width = k - h;
    if (width > 25)
        throw CapacityError("min_steps_to_terminal: class has over 2^25 members");

    const std::uint32_t terminal = std::uint32_t{1} << (width - 1);
    std::vector<std::int32_t> dist(std::size_t{1} << width, -1);
    std::vector<std::uint32_t> queue;
    dist[0] = 0;
    queue.push_back(0);
    if (terminal == 0) return 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t s = queue[head];
        std::int32_t d = dist[s];
        auto visit = [&](std::uint32_t t) -> bool {
            if (dist[t] >= 0) return false;
            dist[t] = d + 1;
            if (t & terminal) return true;
            queue.push_back(t);
            return false;
        };
        // i = h: C^h A -> C^h B rewrites the first suffix position.
        if (!(s & 1u)) {
            if (visit(s | 1u)) return d + 1;
        }
        // 0 < i < h: C^i B^(h-i) A with the C part glued to the block;
        // suffix bits 0..h-i-1 must be B and bit h-i must be A.
        for (int i = 1; i < h; ++i) {
            int bs = h - i;
            if (bs > width - 1) continue;
            std::uint32_t bmask = (std::uint32_t{1} << bs) - 1;
            if ((s & bmask) == bmask && !((s >> bs) & 1u)) {
                if (visit((s & ~bmask) | (std::uint32_t{1} << bs))) return d + 1;
            }
        }
        // i = 0: B^h A anywhere in the suffix.
        for (int t = 0; t + h < width; ++t) {
            std::uint32_t bmask = ((std::uint32_t{1} << h) - 1) << t;
            if ((s & bmask) == bmask && !((s >> (t + h)) & 1u)) {
                if (visit((s & ~bmask) | (std::uint32_t{1} << (t + h)))) return d + 1;
            }
        }
    }
    return -1;  // unreachable for k > h, kept for totality
}

/// One step of a recorded derivation; the result string is implicit.
struct TracePair {
    int pos;   // 0-based
    int rule;  // index into the h = 2 rule list
};

/// Minimal derivation CCA^(k-2) ->* CCA^(k-3)B of length fib(k) - 1 for the
/// h = 2 system, built by the recursion trace(k) = trace(k-1) trace(k-2)
/// followed by one BBA step at position k-3.
inline std::vector<TracePair> rewrite_trace(int k) {
    if (k < 3) throw std::invalid_argument("rewrite_trace: k must be at least 3");
    if (k > 30) throw CapacityError("rewrite_trace: fib(k)-1 steps is too large beyond k=30");
    std::vector<std::vector<TracePair>> t(k + 1);
    t[3] = {{0, 2}};
    if (k >= 4) t[4] = {{0, 2}, {1, 1}};
    for (int j = 5; j <= k; ++j) {
        t[j] = t[j - 1];
        t[j].insert(t[j].end(), t[j - 2].begin(), t[j - 2].end());
        t[j].push_back({j - 3, 0});
    }
    return t[k];
}

/// Replay a derivation, validating every step against the rule table.
inline std::string apply_trace(const RewriteSystem& sys, std::string u,
                               const std::vector<TracePair>& trace) {
    for (const auto& s : trace) {
        const auto& rule = sys.rules.at(s.rule);
        if (s.pos < 0 || s.pos + rule.lhs.size() > u.size() ||
            u.compare(s.pos, rule.lhs.size(), rule.lhs) != 0)
            throw std::logic_error("apply_trace: rule " + std::to_string(s.rule) +
                                   " does not match at position " + std::to_string(s.pos));
        u.replace(s.pos, rule.rhs.size(), rule.rhs);
    }
    return u;
}

}  // namespace synchro
