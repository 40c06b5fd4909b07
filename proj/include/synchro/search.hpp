#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "automaton.hpp"
#include "canonical.hpp"

namespace synchro {

struct SearchConfig {
    int n = 0;
    long long target = -1;  // records need shortest length >= target; -1 picks the default
    int jobs = 1;
    long long node_budget = -1;                 // -1: unlimited
    bool canonicalize = true;                   // prune isomorphic branches, dedupe by class
    std::vector<std::vector<int>> symbol_pool;  // critical search: candidate maps (empty: all)
    std::string checkpoint_path;                // append-only list of finished shard ids
    std::function<void(const Automaton&, const SyncResult&)> on_found;
};

struct SearchStats {
    long long nodes = 0;
    long long pruned_shorter = 0;    // a shorter synchronizing word already exists
    long long pruned_bound = 0;      // extension bound below the target
    long long pruned_canonical = 0;  // not minimal in its isomorphism orbit
    long long shards_total = 0;
    long long shards_done = 0;     // completed in this run
    long long shards_skipped = 0;  // already listed in the checkpoint
};

struct SearchHit {
    Automaton automaton;
    SyncResult sync;
};

struct SearchOutcome {
    std::vector<SearchHit> found;  // deduplicated, sorted by key
    SearchStats stats;
    long long best_length = -1;
    int min_symbols = -1;   // pfa search: smallest alphabet after symbol merging
    bool complete = true;   // false when the node budget ran out
};

namespace detail {

inline std::unordered_set<long long> read_checkpoint(const std::string& path) {
    std::unordered_set<long long> done;
    if (path.empty()) return done;
    std::ifstream in(path);
    long long id;
    while (in >> id) done.insert(id);
    return done;
}

/// Runs work(id) for every shard id not in done, on `jobs` threads, appending
/// each finished id to the checkpoint file. A shard interrupted by the node
/// budget is not checkpointed.
template <typename Fn>
void run_sharded(long long shardCount, const std::unordered_set<long long>& done, int jobs,
                 const std::string& checkpointPath, std::atomic<bool>& stop,
                 std::atomic<long long>& shardsDone, std::atomic<long long>& shardsSkipped,
                 Fn&& work) {
    std::ofstream checkpoint;
    std::mutex fileMu;
    if (!checkpointPath.empty()) {
        checkpoint.open(checkpointPath, std::ios::app);
        if (!checkpoint)
            throw std::runtime_error("cannot open checkpoint file " + checkpointPath);
    }
    std::atomic<long long> next{0};
    auto runner = [&] {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            long long id = next.fetch_add(1, std::memory_order_relaxed);
            if (id >= shardCount) return;
            if (done.count(id)) {
                shardsSkipped.fetch_add(1, std::memory_order_relaxed);
                continue;
            }
            work(id);
            if (stop.load(std::memory_order_relaxed)) return;
            if (checkpoint.is_open()) {
                std::lock_guard<std::mutex> lock(fileMu);
                checkpoint << id << '\n';
                checkpoint.flush();
            }
            shardsDone.fetch_add(1, std::memory_order_relaxed);
        }
    };
    int threads = std::max(1, jobs);
    if (threads == 1) {
        runner();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
}

/// All total maps on n states in ascending lexicographic order, identity
/// excluded (an identity symbol never shortens any word).
inline std::vector<std::vector<int>> all_symbol_maps(int n) {
    std::vector<std::vector<int>> pool;
    std::vector<int> f(n, 0);
    for (;;) {
        bool identity = true;
        for (int q = 0; q < n && identity; ++q) identity = f[q] == q;
        if (!identity) pool.push_back(f);
        int i = n - 1;
        while (i >= 0 && f[i] == n - 1) f[i--] = 0;
        if (i < 0) break;
        ++f[i];
    }
    return pool;
}

/// Streams each isomorphism class (or raw automaton when canonical is off)
/// at most once across all worker threads.
struct HitStreamer {
    bool canonical = true;
    const SearchConfig* cfg = nullptr;
    std::mutex mu;
    std::unordered_set<std::string> streamed;

    std::string key(const Automaton& a) const {
        return canonical ? canonical_key(a) : automaton_key(a);
    }

    void stream(const Automaton& a, const SyncResult& r) {
        if (!cfg->on_found) return;
        std::string k = key(a);
        std::lock_guard<std::mutex> lock(mu);
        if (streamed.insert(std::move(k)).second) cfg->on_found(a, r);
    }
};

/// Deterministic merge: builder hits first, then shard hits in shard order;
/// the first automaton seen per key wins.
inline void merge_hits(SearchOutcome& out, bool canonical, std::vector<SearchHit>&& builderHits,
                       std::vector<std::vector<SearchHit>>&& shardHits) {
    std::map<std::string, SearchHit> byKey;
    auto add = [&](SearchHit&& h) {
        std::string k = canonical ? canonical_key(h.automaton) : automaton_key(h.automaton);
        byKey.emplace(std::move(k), std::move(h));
    };
    for (auto& h : builderHits) add(std::move(h));
    for (auto& shard : shardHits)
        for (auto& h : shard) add(std::move(h));
    out.found.reserve(byKey.size());
    for (auto& [k, h] : byKey) {
        out.best_length = std::max(out.best_length, h.sync.length);
        out.found.push_back(std::move(h));
    }
}

struct CriticalSearch {
    const SearchConfig* cfg = nullptr;
    long long target = 0;
    std::vector<std::vector<int>> pool;
    std::atomic<long long> nodes{0};
    std::atomic<long long> prunedShorter{0};
    std::atomic<long long> prunedBound{0};
    std::atomic<long long> prunedCanonical{0};
    std::atomic<bool> stop{false};
    HitStreamer streamer;

    bool budget_exceeded() {
        long long v = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (cfg->node_budget >= 0 && v > cfg->node_budget) {
            stop.store(true, std::memory_order_relaxed);
            return true;
        }
        return false;
    }

    enum class Verdict { kPrune, kRecurse, kRecordAndRecurse };

    /// Extending an automaton with more symbols never lengthens its shortest
    /// synchronizing word, so a synchronizing node below the target closes
    /// its whole subtree, and a non-synchronizing node closes it whenever
    /// the extension bound is below the target.
    Verdict evaluate(const Automaton& a, int depth, SyncResult& sync) {
        if (cfg->canonicalize && depth <= 2 && automaton_key(a) != canonical_key(a)) {
            prunedCanonical.fetch_add(1, std::memory_order_relaxed);
            return Verdict::kPrune;
        }
        sync = shortest_sync(a);
        if (sync.synchronizing) {
            if (sync.length < target) {
                prunedShorter.fetch_add(1, std::memory_order_relaxed);
                return Verdict::kPrune;
            }
            return Verdict::kRecordAndRecurse;
        }
        if (extension_bound_core(a).L < target) {
            prunedBound.fetch_add(1, std::memory_order_relaxed);
            return Verdict::kPrune;
        }
        return Verdict::kRecurse;
    }

    void record(const Automaton& a, const SyncResult& sync, std::vector<SearchHit>& out) {
        if (!sync.synchronizing || !is_sync_word(a, sync.witness) ||
            static_cast<long long>(sync.witness.size()) != sync.length)
            throw std::logic_error("critical search: witness failed re-verification");
        SearchHit hit{a, sync};
        streamer.stream(hit.automaton, hit.sync);
        out.push_back(std::move(hit));
    }

    /// Children ordered by descending count of reducible pairs (promising
    /// extensions first), ties by ascending pool index.
    std::vector<int> ordered_children(Automaton& a, int maxIdx) {
        std::vector<std::pair<int, int>> scored;
        scored.reserve(pool.size() - maxIdx - 1);
        for (int idx = maxIdx + 1; idx < static_cast<int>(pool.size()); ++idx) {
            a.table.push_back(pool[idx]);
            scored.emplace_back(-reducible_pair_count(a), idx);
            a.table.pop_back();
        }
        std::sort(scored.begin(), scored.end());
        std::vector<int> out;
        out.reserve(scored.size());
        for (auto& [neg, idx] : scored) out.push_back(idx);
        return out;
    }

    /// a's last symbol is pool[idx]; evaluates it and explores supersets.
    void visit(Automaton& a, int depth, int idx, std::vector<SearchHit>& out) {
        if (budget_exceeded()) return;
        SyncResult sync;
        Verdict v = evaluate(a, depth, sync);
        if (v == Verdict::kPrune) return;
        if (v == Verdict::kRecordAndRecurse) record(a, sync, out);
        for (int child : ordered_children(a, idx)) {
            if (stop.load(std::memory_order_relaxed)) return;
            a.table.push_back(pool[child]);
            visit(a, depth + 1, child, out);
            a.table.pop_back();
        }
    }
};

inline std::vector<std::vector<int>> validated_pool(const std::vector<std::vector<int>>& pool,
                                                    int n) {
    std::set<std::vector<int>> seen;
    for (const auto& f : pool) {
        if (static_cast<int>(f.size()) != n)
            throw std::invalid_argument("symbol pool: map has the wrong number of states");
        bool identity = true;
        for (int q = 0; q < n; ++q) {
            if (f[q] < 0 || f[q] >= n)
                throw std::invalid_argument("symbol pool: maps must be total");
            identity = identity && f[q] == q;
        }
        if (identity) throw std::invalid_argument("symbol pool: identity map not allowed");
        if (!seen.insert(f).second)
            throw std::invalid_argument("symbol pool: duplicate map");
    }
    return pool;
}

}  // namespace detail

/// Enumerates complete automata whose symbol sets are ascending chains over
/// the pool and reports every one whose shortest synchronizing word has
/// length >= target (default (n-1)^2). With canonicalize, branches that are
/// not minimal in their isomorphism orbit are cut at depths 1 and 2 and the
/// results are one automaton per isomorphism class; a custom symbol pool
/// must be closed under conjugation for that to be exhaustive.
inline SearchOutcome search_critical_dfas(const SearchConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("search: n must be at least 2");
    if (cfg.n > detail::kFlatBfsLimit)
        throw CapacityError("search_critical_dfas: limited to " +
                            std::to_string(detail::kFlatBfsLimit) + " states");
    if (cfg.canonicalize && cfg.n > 10)
        throw CapacityError("search_critical_dfas: canonical pruning limited to 10 states");

    detail::CriticalSearch st;
    st.cfg = &cfg;
    st.target = cfg.target < 0 ? static_cast<long long>(cfg.n - 1) * (cfg.n - 1) : cfg.target;
    st.pool = cfg.symbol_pool.empty() ? detail::all_symbol_maps(cfg.n)
                                      : detail::validated_pool(cfg.symbol_pool, cfg.n);
    st.streamer.canonical = cfg.canonicalize;
    st.streamer.cfg = &cfg;

    std::vector<SearchHit> builderHits;
    std::vector<std::pair<int, int>> shards;
    for (int d1 = 0; d1 < static_cast<int>(st.pool.size()); ++d1) {
        if (st.stop.load(std::memory_order_relaxed)) break;
        if (st.budget_exceeded()) break;
        Automaton a;
        a.states = cfg.n;
        a.table = {st.pool[d1]};
        SyncResult sync;
        auto v = st.evaluate(a, 1, sync);
        if (v == detail::CriticalSearch::Verdict::kPrune) continue;
        if (v == detail::CriticalSearch::Verdict::kRecordAndRecurse)
            st.record(a, sync, builderHits);
        for (int d2 : st.ordered_children(a, d1)) shards.emplace_back(d1, d2);
    }

    auto done = detail::read_checkpoint(cfg.checkpoint_path);
    for (long long id : done)
        if (id < 0 || id >= static_cast<long long>(shards.size()))
            throw std::runtime_error("checkpoint does not match this search");

    std::vector<std::vector<SearchHit>> shardHits(shards.size());
    std::atomic<long long> shardsDone{0}, shardsSkipped{0};
    detail::run_sharded(
        static_cast<long long>(shards.size()), done, cfg.jobs, cfg.checkpoint_path, st.stop,
        shardsDone, shardsSkipped, [&](long long id) {
            auto [d1, d2] = shards[static_cast<std::size_t>(id)];
            Automaton a;
            a.states = cfg.n;
            a.table = {st.pool[d1], st.pool[d2]};
            st.visit(a, 2, d2, shardHits[static_cast<std::size_t>(id)]);
        });

    SearchOutcome out;
    detail::merge_hits(out, cfg.canonicalize, std::move(builderHits), std::move(shardHits));
    out.complete = !st.stop.load();
    out.stats.nodes = st.nodes.load();
    out.stats.pruned_shorter = st.prunedShorter.load();
    out.stats.pruned_bound = st.prunedBound.load();
    out.stats.pruned_canonical = st.prunedCanonical.load();
    out.stats.shards_total = static_cast<long long>(shards.size());
    out.stats.shards_done = shardsDone.load();
    out.stats.shards_skipped = shardsSkipped.load();
    return out;
}

/// Smallest alphabet obtainable from a by repeatedly merging two compatible
/// symbols (no conflicting entries) while the shortest careful
/// synchronization length stays exactly targetLen. Merging adds options, so
/// the length never grows; branches that drop below are closed.
inline int min_symbols_after_merge(const Automaton& a, long long targetLen) {
    std::unordered_set<std::string> seen{automaton_key(a)};
    std::vector<Automaton> queue{a};
    int best = a.symbols();
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Automaton x = queue[head];
        const int m = x.symbols();
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                bool compatible = true;
                for (int q = 0; q < x.states && compatible; ++q)
                    compatible = x.table[i][q] == kUndefined || x.table[j][q] == kUndefined ||
                                 x.table[i][q] == x.table[j][q];
                if (!compatible) continue;
                Automaton y;
                y.states = x.states;
                for (int s = 0; s < m; ++s)
                    if (s != j) y.table.push_back(x.table[s]);
                for (int q = 0; q < x.states; ++q)
                    if (x.table[j][q] != kUndefined) y.table[i][q] = x.table[j][q];
                if (!seen.insert(automaton_key(y)).second) continue;
                SyncResult r = shortest_sync(y);
                if (!r.synchronizing || r.length != targetLen) continue;
                best = std::min(best, y.symbols());
                queue.push_back(std::move(y));
            }
        }
    }
    return best;
}

namespace detail {

struct PfaChoice {
    int sym = 0;
    bool fresh = false;
    std::vector<std::pair<int, int>> defs;  // entries (state, target) this step adds
};

struct PfaSearch {
    const SearchConfig* cfg = nullptr;
    int n = 0;
    long long target = 0;
    std::atomic<long long> nodes{0};
    std::atomic<long long> prunedShorter{0};
    std::atomic<long long> prunedBound{0};
    std::atomic<long long> prunedCanonical{0};
    std::atomic<bool> stop{false};
    HitStreamer streamer;

    bool budget_exceeded() {
        long long v = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (cfg->node_budget >= 0 && v > cfg->node_budget) {
            stop.store(true, std::memory_order_relaxed);
            return true;
        }
        return false;
    }

    int image_mask(const std::vector<int>& row, int mask) const {
        int img = 0;
        while (mask) {
            int t = row[std::countr_zero(static_cast<unsigned>(mask))];
            if (t == kUndefined) return -1;
            img |= 1 << t;
            mask &= mask - 1;
        }
        return img;
    }

    /// Distances of every subset from Q in the power automaton of the
    /// current (partial) tables, and the nearest singleton if any.
    void bfs(const std::vector<std::vector<int>>& syms, std::vector<int>& dist,
             long long& minSingle) const {
        const int full = (1 << n) - 1;
        dist.assign(std::size_t{1} << n, -1);
        static thread_local std::vector<int> queue;
        queue.clear();
        dist[full] = 0;
        queue.push_back(full);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int mask = queue[head];
            for (const auto& row : syms) {
                int img = image_mask(row, mask);
                if (img < 0) continue;
                if (dist[img] < 0) {
                    dist[img] = dist[mask] + 1;
                    queue.push_back(img);
                }
            }
        }
        minSingle = -1;
        for (int q = 0; q < n; ++q) {
            int d = dist[std::size_t{1} << q];
            if (d >= 0 && (minSingle < 0 || d < minSingle)) minSingle = d;
        }
    }

    /// Next-letter choices on the current set V, in deterministic order:
    /// existing symbols first (extensions enumerated over their undefined
    /// part), then a fresh symbol defined exactly on V. A choice whose image
    /// set duplicates an earlier letter already defined on V is dropped:
    /// using the earlier letter dominates it.
    std::vector<PfaChoice> choices(const std::vector<std::vector<int>>& syms, int V) const {
        std::vector<PfaChoice> out;
        std::vector<int> seenImages;
        auto seen = [&](int img) {
            return std::find(seenImages.begin(), seenImages.end(), img) != seenImages.end();
        };
        for (int j = 0; j < static_cast<int>(syms.size()); ++j) {
            std::vector<int> undef;
            int partial = 0;
            for (int mask = V; mask;) {
                int q = std::countr_zero(static_cast<unsigned>(mask));
                mask &= mask - 1;
                int t = syms[j][q];
                if (t == kUndefined) undef.push_back(q);
                else partial |= 1 << t;
            }
            if (undef.empty()) {
                if (!seen(partial)) {
                    out.push_back({j, false, {}});
                    seenImages.push_back(partial);
                }
                continue;
            }
            std::vector<int> targets(undef.size(), 0);
            for (;;) {
                int img = partial;
                for (int t : targets) img |= 1 << t;
                if (!seen(img)) {
                    PfaChoice c;
                    c.sym = j;
                    for (std::size_t i = 0; i < undef.size(); ++i)
                        c.defs.emplace_back(undef[i], targets[i]);
                    out.push_back(std::move(c));
                }
                int i = static_cast<int>(targets.size()) - 1;
                while (i >= 0 && targets[i] == n - 1) targets[i--] = 0;
                if (i < 0) break;
                ++targets[i];
            }
        }
        std::vector<int> members;
        for (int mask = V; mask; mask &= mask - 1)
            members.push_back(std::countr_zero(static_cast<unsigned>(mask)));
        std::vector<int> targets(members.size(), 0);
        for (;;) {
            int img = 0;
            for (int t : targets) img |= 1 << t;
            if (!seen(img)) {
                PfaChoice c;
                c.sym = static_cast<int>(syms.size());
                c.fresh = true;
                for (std::size_t i = 0; i < members.size(); ++i)
                    c.defs.emplace_back(members[i], targets[i]);
                out.push_back(std::move(c));
            }
            int i = static_cast<int>(targets.size()) - 1;
            while (i >= 0 && targets[i] == n - 1) targets[i--] = 0;
            if (i < 0) break;
            ++targets[i];
        }
        return out;
    }

    static void apply(std::vector<std::vector<int>>& syms, const PfaChoice& c, int n) {
        if (c.fresh) syms.emplace_back(n, kUndefined);
        for (auto [q, t] : c.defs) syms[c.sym][q] = t;
    }

    static void undo(std::vector<std::vector<int>>& syms, const PfaChoice& c) {
        if (c.fresh) {
            syms.pop_back();
            return;
        }
        for (auto [q, t] : c.defs) syms[c.sym][q] = kUndefined;
    }

    Automaton to_automaton(const std::vector<std::vector<int>>& syms) const {
        Automaton a;
        a.states = n;
        a.table = syms;
        return a;
    }

    void record(const std::vector<std::vector<int>>& syms, const Word& word,
                std::vector<SearchHit>& out) {
        SearchHit hit;
        hit.automaton = to_automaton(syms);
        hit.sync = shortest_sync(hit.automaton);
        if (!hit.sync.synchronizing || hit.sync.length != static_cast<long long>(word.size()) ||
            !is_sync_word(hit.automaton, word))
            throw std::logic_error("pfa search: record failed re-verification");
        streamer.stream(hit.automaton, hit.sync);
        out.push_back(std::move(hit));
    }

    /// Evaluates the node reached by `word` (set V, tables syms) and expands
    /// it. Definitions only ever get added along a branch, which can only
    /// shorten the shortest careful synchronization; all cuts below rely on
    /// that monotonicity.
    void visit(std::vector<std::vector<int>>& syms, Word& word, int V,
               std::vector<SearchHit>& out) {
        if (budget_exceeded()) return;
        static thread_local std::vector<int> dist;
        long long minSingle;
        bfs(syms, dist, minSingle);
        const long long len = static_cast<long long>(word.size());
        if (dist[V] < len) {  // some shorter word already reaches V
            prunedShorter.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        if ((V & (V - 1)) == 0) {
            if (minSingle >= len && len >= target) record(syms, word, out);
            else prunedShorter.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        if (minSingle >= 0) {
            if (minSingle < target) {
                prunedShorter.fetch_add(1, std::memory_order_relaxed);
                return;
            }
        } else {
            Automaton a = to_automaton(syms);
            if (extension_bound_core(a).L < target) {
                prunedBound.fetch_add(1, std::memory_order_relaxed);
                return;
            }
        }
        for (const PfaChoice& c : choices(syms, V)) {
            if (stop.load(std::memory_order_relaxed)) return;
            apply(syms, c, n);
            int img = image_mask(syms[c.sym], V);
            word.push_back(c.sym);
            visit(syms, word, img, out);
            word.pop_back();
            undo(syms, c);
        }
    }
};

}  // namespace detail

/// Searches for partial automata whose shortest carefully synchronizing word
/// has length >= target (default: the known maximum for n <= 6). Words are
/// grown letter by letter; a symbol is defined exactly where some prefix set
/// needed it, so every reported automaton carries no unused entries. With
/// canonicalize, the first symbol is restricted to the minimal conjugate of
/// its class and results are deduplicated per isomorphism class.
inline SearchOutcome search_pfa_max(const SearchConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("search: n must be at least 2");
    if (cfg.n > 6) throw CapacityError("search_pfa_max: limited to 6 states");
    static const long long kKnownMax[7] = {0, 0, 1, 4, 10, 21, 37};

    detail::PfaSearch st;
    st.cfg = &cfg;
    st.n = cfg.n;
    st.target = cfg.target < 0 ? kKnownMax[cfg.n] : cfg.target;
    st.streamer.canonical = cfg.canonicalize;
    st.streamer.cfg = &cfg;

    std::vector<std::vector<int>> firstMaps = detail::all_symbol_maps(cfg.n);
    if (cfg.canonicalize) {
        std::vector<std::vector<int>> reps;
        for (auto& f : firstMaps) {
            if (min_conjugate_symbol(f) == f) reps.push_back(std::move(f));
            else st.prunedCanonical.fetch_add(1, std::memory_order_relaxed);
        }
        firstMaps = std::move(reps);
    }

    const int full = (1 << cfg.n) - 1;
    std::vector<SearchHit> builderHits;
    std::vector<std::pair<int, int>> shards;  // (first map, choice ordinal)
    for (int d1 = 0; d1 < static_cast<int>(firstMaps.size()); ++d1) {
        if (st.stop.load(std::memory_order_relaxed)) break;
        if (st.budget_exceeded()) break;
        std::vector<std::vector<int>> syms{firstMaps[d1]};
        int V = st.image_mask(syms[0], full);
        std::vector<int> dist;
        long long minSingle;
        st.bfs(syms, dist, minSingle);
        if (dist[V] < 1) {
            st.prunedShorter.fetch_add(1, std::memory_order_relaxed);
            continue;
        }
        if ((V & (V - 1)) == 0) {
            Word word{0};
            if (minSingle >= 1 && 1 >= st.target) st.record(syms, word, builderHits);
            else st.prunedShorter.fetch_add(1, std::memory_order_relaxed);
            continue;
        }
        if (minSingle >= 0) {
            if (minSingle < st.target) {
                st.prunedShorter.fetch_add(1, std::memory_order_relaxed);
                continue;
            }
        } else if (detail::extension_bound_core(st.to_automaton(syms)).L < st.target) {
            st.prunedBound.fetch_add(1, std::memory_order_relaxed);
            continue;
        }
        int count = static_cast<int>(st.choices(syms, V).size());
        for (int c = 0; c < count; ++c) shards.emplace_back(d1, c);
    }

    auto done = detail::read_checkpoint(cfg.checkpoint_path);
    for (long long id : done)
        if (id < 0 || id >= static_cast<long long>(shards.size()))
            throw std::runtime_error("checkpoint does not match this search");

    std::vector<std::vector<SearchHit>> shardHits(shards.size());
    std::atomic<long long> shardsDone{0}, shardsSkipped{0};
    static std::atomic<long long> generation{0};
    const long long thisSearch = generation.fetch_add(1) + 1;
    detail::run_sharded(
        static_cast<long long>(shards.size()), done, cfg.jobs, cfg.checkpoint_path, st.stop,
        shardsDone, shardsSkipped, [&](long long id) {
            auto [d1, cIdx] = shards[static_cast<std::size_t>(id)];
            // Workers cache the choice list of the current first map; shard
            // ids are claimed in order, so consecutive shards usually share it.
            static thread_local long long cachedSearch = -1;
            static thread_local int cachedD1 = -1;
            static thread_local std::vector<std::vector<int>> syms;
            static thread_local int rootV = 0;
            static thread_local std::vector<detail::PfaChoice> rootChoices;
            if (cachedSearch != thisSearch || cachedD1 != d1) {
                syms.assign(1, firstMaps[d1]);
                rootV = st.image_mask(syms[0], full);
                rootChoices = st.choices(syms, rootV);
                cachedSearch = thisSearch;
                cachedD1 = d1;
            }
            const detail::PfaChoice& c = rootChoices[static_cast<std::size_t>(cIdx)];
            detail::PfaSearch::apply(syms, c, cfg.n);
            int img = st.image_mask(syms[c.sym], rootV);
            Word word{0, c.sym};
            st.visit(syms, word, img, shardHits[static_cast<std::size_t>(id)]);
            detail::PfaSearch::undo(syms, c);
        });

    SearchOutcome out;
    detail::merge_hits(out, cfg.canonicalize, std::move(builderHits), std::move(shardHits));
    out.complete = !st.stop.load();
    out.stats.nodes = st.nodes.load();
    out.stats.pruned_shorter = st.prunedShorter.load();
    out.stats.pruned_bound = st.prunedBound.load();
    out.stats.pruned_canonical = st.prunedCanonical.load();
    out.stats.shards_total = static_cast<long long>(shards.size());
    out.stats.shards_done = shardsDone.load();
    out.stats.shards_skipped = shardsSkipped.load();
    for (const SearchHit& h : out.found) {
        int ms = min_symbols_after_merge(h.automaton, h.sync.length);
        if (out.min_symbols < 0 || ms < out.min_symbols) out.min_symbols = ms;
    }
    return out;
}

}  // namespace synchro
