#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "automaton.hpp"

namespace synchro {

struct SyncResult {
    bool synchronizing = false;
    long long length = -1;
    Word witness;   // lexicographically smallest among the shortest, by symbol index
    int sink = -1;  // the single state reached
};

namespace detail {

/// Sets of n <= kFlatBfsLimit states are tracked in a flat 2^n bitmap; larger
/// state counts fall back to a hash set.
inline constexpr int kFlatBfsLimit = 25;

template <unsigned Words>
struct VisitedSets {
    bool flat;
    std::vector<std::uint64_t> bitmap;
    std::unordered_set<BasicStateSet<Words>, StateSetHash<Words>> seen;

    explicit VisitedSets(int n) : flat(Words == 1 && n <= kFlatBfsLimit) {
        if (flat) bitmap.assign((std::size_t{1} << n) / 64 + 1, 0);
    }

    /// Returns the previous membership and inserts.
    bool test_and_set(const BasicStateSet<Words>& s) {
        if (flat) {
            std::uint64_t v = s.bits[0];
            std::uint64_t& w = bitmap[v >> 6];
            std::uint64_t m = std::uint64_t{1} << (v & 63);
            if (w & m) return true;
            w |= m;
            return false;
        }
        return !seen.insert(s).second;
    }
};

template <unsigned Words>
struct BfsNode {
    BasicStateSet<Words> set;
    std::int64_t parent;  // index into the node vector, -1 at the root
    int sym;
    long long dist;
};

/// Breadth-first search over the power automaton, skipping blocked (empty)
/// images. Symbols are expanded in ascending order, so the first path found
/// to any set is the lexicographically smallest among the shortest ones.
/// Returns all discovered nodes plus the index of the first node satisfying
/// `stop`, or -1 if none does.
template <unsigned Words, class Stop>
std::pair<std::vector<BfsNode<Words>>, std::int64_t>
subset_bfs(const Automaton& a, const BasicStateSet<Words>& start, Stop stop) {
    std::vector<BfsNode<Words>> nodes;
    VisitedSets<Words> visited(a.states);
    visited.test_and_set(start);
    nodes.push_back({start, -1, -1, 0});
    if (stop(start)) return {std::move(nodes), 0};
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const auto cur = nodes[head];
        for (int sym = 0; sym < a.symbols(); ++sym) {
            auto img = step(a, cur.set, sym);
            if (img.empty()) continue;
            if (visited.test_and_set(img)) continue;
            nodes.push_back({img, static_cast<std::int64_t>(head), sym, cur.dist + 1});
            if (stop(img))
                return {std::move(nodes), static_cast<std::int64_t>(nodes.size() - 1)};
        }
    }
    return {std::move(nodes), -1};
}

template <unsigned Words>
Word path_word(const std::vector<BfsNode<Words>>& nodes, std::int64_t idx) {
    Word w;
    while (idx >= 0 && nodes[idx].parent >= 0) {
        w.push_back(nodes[idx].sym);
        idx = nodes[idx].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

template <unsigned Words>
SyncResult shortest_sync_impl(const Automaton& a) {
    auto [nodes, hit] = subset_bfs<Words>(
        a, BasicStateSet<Words>::full(a.states),
        [](const BasicStateSet<Words>& s) { return s.is_singleton(); });
    SyncResult r;
    if (hit < 0) return r;
    r.synchronizing = true;
    r.length = nodes[hit].dist;
    r.witness = path_word(nodes, hit);
    r.sink = nodes[hit].set.lowest();
    return r;
}

inline unsigned long long saturating_add(unsigned long long a, unsigned long long b) {
    unsigned long long s = a + b;
    return s < a ? ~0ull : s;
}

template <unsigned Words>
unsigned long long count_shortest_impl(const Automaton& a) {
    using Set = BasicStateSet<Words>;
    struct Node {
        Set set;
        long long dist;
        unsigned long long cnt;
    };
    auto start = Set::full(a.states);
    if (start.is_singleton()) return 1;  // the empty word
    std::unordered_map<Set, std::size_t, StateSetHash<Words>> index;
    std::vector<Node> nodes;
    index.emplace(start, 0);
    nodes.push_back({start, 0, 1});
    long long found = -1;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const auto cur = nodes[head];
        if (found >= 0 && cur.dist >= found) break;
        for (int sym = 0; sym < a.symbols(); ++sym) {
            auto img = step(a, cur.set, sym);
            if (img.empty()) continue;
            auto [it, fresh] = index.emplace(img, nodes.size());
            if (fresh) {
                nodes.push_back({img, cur.dist + 1, cur.cnt});
                if (img.is_singleton() && found < 0) found = cur.dist + 1;
            } else {
                auto& nd = nodes[it->second];
                if (nd.dist == cur.dist + 1) nd.cnt = saturating_add(nd.cnt, cur.cnt);
            }
        }
    }
    if (found < 0) return 0;
    unsigned long long total = 0;
    for (const auto& nd : nodes)
        if (nd.dist == found && nd.set.is_singleton()) total = saturating_add(total, nd.cnt);
    return total;
}

}  // namespace detail

/// Shortest synchronizing word by subset BFS from the full state set. On a
/// partial automaton this is careful synchronization: blocked images are
/// dead ends, never progress.
inline SyncResult shortest_sync(const Automaton& a) {
    if (a.states <= StateSet::capacity) return detail::shortest_sync_impl<1>(a);
    if (a.states <= WideStateSet::capacity) return detail::shortest_sync_impl<2>(a);
    throw CapacityError("shortest_sync: more than 128 states");
}

/// Number of distinct shortest synchronizing words (saturating at 2^64-1);
/// 0 when the automaton does not synchronize.
inline unsigned long long count_shortest_sync_words(const Automaton& a) {
    if (a.states <= StateSet::capacity) return detail::count_shortest_impl<1>(a);
    if (a.states <= WideStateSet::capacity) return detail::count_shortest_impl<2>(a);
    throw CapacityError("count_shortest_sync_words: more than 128 states");
}

/// Shortest word w with |set . w| < |set| (the image staying non-empty), or
/// nullopt if the set is irreducible.
template <unsigned Words>
std::optional<Word> is_reducible(const Automaton& a, const BasicStateSet<Words>& set) {
    const int k = set.size();
    if (k < 2) throw std::invalid_argument("is_reducible: set needs at least two states");
    auto [nodes, hit] = detail::subset_bfs<Words>(
        a, set, [&](const BasicStateSet<Words>& v) { return v.size() < k; });
    if (hit < 0) return std::nullopt;
    return detail::path_word(nodes, hit);
}

inline std::optional<Word> is_reducible(const Automaton& a, const std::vector<int>& states) {
    if (a.states <= StateSet::capacity) return is_reducible(a, set_of<1>(states));
    if (a.states <= WideStateSet::capacity) return is_reducible(a, set_of<2>(states));
    throw CapacityError("is_reducible: more than 128 states");
}

/// Count of unordered state pairs that can be merged by some word, via
/// backward closure over the pair graph. Pairs blocked by undefined
/// transitions contribute no edges.
inline int reducible_pair_count(const Automaton& a) {
    const int n = a.states;
    auto id = [n](int p, int q) { return p * n + q; };  // p < q
    std::vector<char> red(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::vector<int>> radj(static_cast<std::size_t>(n) * n);
    std::queue<int> work;
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (int sym = 0; sym < a.symbols(); ++sym) {
                int tp = a.table[sym][p], tq = a.table[sym][q];
                if (tp == kUndefined || tq == kUndefined) continue;
                if (tp == tq) {
                    if (!red[id(p, q)]) {
                        red[id(p, q)] = 1;
                        work.push(id(p, q));
                    }
                } else {
                    if (tp > tq) std::swap(tp, tq);
                    radj[id(tp, tq)].push_back(id(p, q));
                }
            }
        }
    }
    while (!work.empty()) {
        int u = work.front();
        work.pop();
        for (int v : radj[u])
            if (!red[v]) {
                red[v] = 1;
                work.push(v);
            }
    }
    int count = 0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) count += red[id(p, q)];
    return count;
}

/// True iff every 2-subset of states is reducible. For complete automata
/// this is the classical synchronizability criterion.
inline bool all_pairs_reducible(const Automaton& a) {
    return reducible_pair_count(a) == a.states * (a.states - 1) / 2;
}

struct SccComponent {
    std::vector<std::size_t> members;  // indices into the vertex list
    long long diameter = 0;            // max shortest-path length over ordered pairs
};

struct SccDecomposition {
    std::vector<SccComponent> components;
};

namespace detail {

/// Iterative Tarjan on an index graph. Components are returned sorted by
/// their smallest member index so the output does not depend on traversal
/// internals.
inline std::vector<std::vector<std::size_t>>
strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<long long> index(n, -1), low(n, 0);
    std::vector<char> onstack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    long long next = 0;

    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    std::vector<Frame> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = next++;
        stack.push_back(root);
        onstack[root] = 1;
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                std::size_t w = adj[f.v][f.edge++];
                if (index[w] < 0) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    onstack[w] = 1;
                    frames.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<std::size_t> comp;
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        onstack[w] = 0;
                        comp.push_back(w);
                    } while (w != v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
            }
        }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return comps;
}

/// Max over ordered pairs of shortest-path length, restricted to comp.
inline long long component_diameter(const std::vector<std::vector<std::size_t>>& adj,
                                    const std::vector<std::size_t>& comp) {
    if (comp.size() <= 1) return 0;
    std::unordered_map<std::size_t, int> pos;
    pos.reserve(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) pos.emplace(comp[i], static_cast<int>(i));
    long long diameter = 0;
    std::vector<int> dist(comp.size());
    std::vector<int> queue;
    for (std::size_t src = 0; src < comp.size(); ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.assign(1, static_cast<int>(src));
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            for (std::size_t w : adj[comp[u]]) {
                auto it = pos.find(w);
                if (it == pos.end() || dist[it->second] >= 0) continue;
                dist[it->second] = dist[u] + 1;
                queue.push_back(it->second);
            }
        }
        for (int d : dist) diameter = std::max<long long>(diameter, d);
    }
    return diameter;
}

}  // namespace detail

/// Strongly connected components of the graph on `vertices` whose edges are
/// u -> edge(u, sym) for sym in 0..symbols-1; edges leaving the vertex list
/// are ignored. edge returns nullopt for blocked moves.
template <unsigned Words, class EdgeFn>
SccDecomposition scc_decompose(const std::vector<BasicStateSet<Words>>& vertices, int symbols,
                               EdgeFn edge) {
    std::unordered_map<BasicStateSet<Words>, std::size_t, StateSetHash<Words>> index;
    index.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) index.emplace(vertices[i], i);
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (int sym = 0; sym < symbols; ++sym) {
            auto img = edge(vertices[i], sym);
            if (!img) continue;
            auto it = index.find(*img);
            if (it != index.end()) adj[i].push_back(it->second);
        }
    }
    SccDecomposition out;
    for (auto& comp : detail::strongly_connected(adj)) {
        SccComponent c;
        c.diameter = detail::component_diameter(adj, comp);
        c.members = std::move(comp);
        out.components.push_back(std::move(c));
    }
    return out;
}

struct BoundLayer {
    int k = 0;
    long long components = 0;     // SCCs among irreducible k-sets
    long long diameter_sum = 0;   // sum of their diameters
    long long m_k = 0;            // components + diameter_sum
    long long l_k = 0;            // max shortest-reduction length over reducible k-sets
    long long irreducible = 0;    // number of irreducible k-sets
};

/// Report behind the synchronization-length bound for extensions: any
/// synchronizing automaton obtained by adding symbols (or filling in
/// undefined transitions) synchronizes within L = m + sum_k (m_k + l_k).
struct BoundReport {
    int smallest_reachable_size = 0;
    long long m = 0;                // BFS distance from Q to a smallest reachable set
    std::vector<BoundLayer> layers; // k = 2 .. smallest_reachable_size
    long long L = 0;
};

namespace detail {

/// Bound computation shared by the public DFA-only operation and the search
/// engine (which also applies it to partial automata).
inline BoundReport extension_bound_core(const Automaton& a) {
    const int n = a.states;
    if (n > kFlatBfsLimit)
        throw CapacityError("extension_bound: limited to " + std::to_string(kFlatBfsLimit) +
                            " states");
    BoundReport report;

    auto [nodes, ignored] = subset_bfs<1>(a, StateSet::full(n),
                                          [](const StateSet&) { return false; });
    int smallest = n + 1;
    long long m = 0;
    for (const auto& nd : nodes) {
        int sz = nd.set.size();
        if (sz < smallest) {
            smallest = sz;
            m = nd.dist;
        } else if (sz == smallest) {
            m = std::min(m, nd.dist);
        }
    }
    report.smallest_reachable_size = smallest;
    report.m = m;
    report.L = m;

    for (int k = 2; k <= smallest; ++k) {
        // All k-subsets of Q in ascending bit-pattern order (Gosper's hack).
        std::vector<std::uint64_t> sets;
        for (std::uint64_t c = (std::uint64_t{1} << k) - 1; c < (std::uint64_t{1} << n);) {
            sets.push_back(c);
            std::uint64_t lo = c & -c, r = c + lo;
            c = (((r ^ c) >> 2) / lo) | r;
        }
        auto locate = [&](std::uint64_t v) {
            return static_cast<std::size_t>(
                std::lower_bound(sets.begin(), sets.end(), v) - sets.begin());
        };

        std::vector<std::vector<std::size_t>> adj(sets.size()), radj(sets.size());
        std::vector<int> dist(sets.size(), 0);  // shortest reduction length, 0 = none yet
        std::vector<std::size_t> queue;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (int sym = 0; sym < a.symbols(); ++sym) {
                auto img = step(a, StateSet{{sets[i]}}, sym);
                if (img.empty()) continue;
                if (img.size() == k) {
                    std::size_t j = locate(img.bits[0]);
                    adj[i].push_back(j);
                    radj[j].push_back(i);
                } else if (!dist[i]) {
                    dist[i] = 1;
                    queue.push_back(i);
                }
            }
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::size_t u = queue[head];
            for (std::size_t v : radj[u])
                if (!dist[v]) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }

        BoundLayer layer;
        layer.k = k;
        for (int d : dist) layer.l_k = std::max<long long>(layer.l_k, d);

        // Irreducible k-sets form a closed subgraph: restrict and decompose.
        std::vector<std::size_t> irr;
        std::vector<long long> sub_index(sets.size(), -1);
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (!dist[i]) {
                sub_index[i] = static_cast<long long>(irr.size());
                irr.push_back(i);
            }
        layer.irreducible = static_cast<long long>(irr.size());
        std::vector<std::vector<std::size_t>> sub(irr.size());
        for (std::size_t si = 0; si < irr.size(); ++si)
            for (std::size_t j : adj[irr[si]])
                if (sub_index[j] >= 0) sub[si].push_back(static_cast<std::size_t>(sub_index[j]));
        for (const auto& comp : strongly_connected(sub)) {
            ++layer.components;
            layer.diameter_sum += component_diameter(sub, comp);
        }
        layer.m_k = layer.components + layer.diameter_sum;
        report.L += layer.m_k + layer.l_k;
        report.layers.push_back(layer);
    }
    return report;
}

}  // namespace detail

/// Extension bound for complete automata. Partial automata are rejected;
/// the search engine uses the internal core where the generalization is
/// required.
inline BoundReport extension_bound(const Automaton& a) {
    if (!is_complete(a))
        throw std::invalid_argument("extension_bound: automaton must be complete");
    return detail::extension_bound_core(a);
}

}  // namespace synchro
