// Command-line front end: generate the library's automaton families,
// analyze automata in the text format, run the exhaustive searches, and
// query the rewrite-system oracles.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <synchro/synchro.hpp>

namespace {

using nlohmann::json;
using namespace synchro;

Automaton load_automaton(const std::string& path) {
    if (path == "-") return read_automaton(std::cin);
    return read_automaton_file(path);
}

void emit_automaton(const Automaton& a, const std::string& outPath) {
    if (outPath == "-") {
        write_automaton(std::cout, a);
        return;
    }
    write_automaton_file(outPath, a);
}

json automaton_json(const Automaton& a) {
    json table = json::array();
    for (const auto& row : a.table) {
        json r = json::array();
        for (int t : row) {
            if (t == kUndefined) r.push_back(nullptr);
            else r.push_back(t);
        }
        table.push_back(std::move(r));
    }
    json j;
    if (!a.name.empty()) j["name"] = a.name;
    j["states"] = a.states;
    j["symbols"] = a.symbols();
    j["table"] = std::move(table);
    return j;
}

int pad_from_total(int total, int base, int maxPad, const char* what) {
    if (total < 0) return 0;
    int pad = total - base;
    if (pad < 0 || pad > maxPad)
        throw std::invalid_argument(std::string(what) + ": --pad-to must be between " +
                                    std::to_string(base) + " and " +
                                    std::to_string(base + maxPad));
    return pad;
}

struct GenerateArgs {
    std::string family;
    int n = 0;
    int k = 0;
    int h = 2;
    int padTo = -1;
    std::string qprime = "empty";
    std::string out = "-";
};

int run_generate(const GenerateArgs& g) {
    Automaton a;
    if (g.family == "cerny") {
        a = cerny(g.n);
    } else if (g.family == "record-pfa") {
        a = record_pfa(g.n);
    } else if (g.family == "exp-pfa") {
        a = exp_pfa(g.k, g.h, pad_from_total(g.padTo, 3 * g.k, 2, "exp-pfa"));
    } else {  // exp-pfa-2sym
        bool a4k = g.qprime == "a4k";
        int base = a4k ? 5 * g.k + g.h + 1 : 6 * g.k;
        a = exp_pfa_two_symbol(g.k, g.h, a4k, pad_from_total(g.padTo, base, 4, "exp-pfa-2sym"));
    }
    emit_automaton(a, g.out);
    return 0;
}

struct AnalyzeArgs {
    std::string file;
    bool bound = false;
    std::string witness;
    std::string format = "text";
};

void print_bound_text(const BoundReport& rep) {
    std::cout << "extension bound L: " << rep.L << "\n";
    std::cout << "  smallest reachable set: " << rep.smallest_reachable_size
              << " (distance " << rep.m << ")\n";
    for (const auto& layer : rep.layers) {
        std::cout << "  k=" << layer.k << ": irreducible components=" << layer.components
                  << ", diameter sum=" << layer.diameter_sum << ", m_k=" << layer.m_k
                  << ", l_k=" << layer.l_k << "\n";
    }
}

json bound_json(const BoundReport& rep) {
    json layers = json::array();
    for (const auto& layer : rep.layers) {
        layers.push_back({{"k", layer.k},
                          {"components", layer.components},
                          {"diameter_sum", layer.diameter_sum},
                          {"m_k", layer.m_k},
                          {"l_k", layer.l_k}});
    }
    return {{"L", rep.L},
            {"smallest_reachable_size", rep.smallest_reachable_size},
            {"m", rep.m},
            {"layers", std::move(layers)}};
}

int run_analyze(const AnalyzeArgs& args) {
    Automaton a = load_automaton(args.file);
    const bool jsonl = args.format == "jsonl";
    json j = automaton_json(a);
    j["complete"] = is_complete(a);
    int exitCode;
    if (!args.witness.empty()) {
        Word w = parse_word(args.witness);
        for (int sym : w)
            if (sym >= a.symbols())
                throw std::invalid_argument("witness uses symbol " + symbol_name(sym) +
                                            " outside the alphabet");
        bool ok = is_sync_word(a, w);
        j["witness"] = word_to_string(w);
        j["witness_synchronizes"] = ok;
        if (ok) {
            auto v = apply_word(a, WideStateSet::full(a.states), w);
            j["sink"] = v.lowest();
        }
        exitCode = ok ? 0 : 1;
        if (!jsonl) {
            std::cout << "witness " << word_to_string(w) << ": "
                      << (ok ? "synchronizes" : "does not synchronize");
            if (ok) std::cout << " (sink " << j["sink"].get<int>() << ")";
            std::cout << "\n";
        }
    } else {
        SyncResult r = shortest_sync(a);
        if (r.synchronizing &&
            (!is_sync_word(a, r.witness) ||
             static_cast<long long>(r.witness.size()) != r.length))
            throw std::logic_error("internal: witness failed re-verification");
        j["synchronizing"] = r.synchronizing;
        if (r.synchronizing) {
            j["length"] = r.length;
            j["witness"] = word_to_string(r.witness);
            j["sink"] = r.sink;
        }
        exitCode = r.synchronizing ? 0 : 1;
        if (!jsonl) {
            if (!a.name.empty()) std::cout << "name: " << a.name << "\n";
            std::cout << "states: " << a.states << ", symbols: " << a.symbols()
                      << ", complete: " << (is_complete(a) ? "yes" : "no") << "\n";
            if (r.synchronizing) {
                std::cout << "synchronizing: yes\nlength: " << r.length
                          << "\nwitness: " << word_to_string(r.witness) << "\nsink: " << r.sink
                          << "\n";
            } else {
                std::cout << "synchronizing: no\n";
            }
        }
    }
    if (args.bound) {
        BoundReport rep = extension_bound(a);
        j["bound"] = bound_json(rep);
        if (!jsonl) print_bound_text(rep);
    }
    if (jsonl) std::cout << j.dump() << "\n";
    return exitCode;
}

struct SearchArgs {
    std::string kind;
    int n = 0;
    long long target = -1;
    int jobs = 1;
    long long budget = -1;
    std::string resume;
    bool noCanonical = false;
    std::string format = "text";
};

int run_search(const SearchArgs& args) {
    SearchConfig cfg;
    cfg.n = args.n;
    cfg.target = args.target;
    cfg.jobs = args.jobs;
    cfg.node_budget = args.budget;
    cfg.checkpoint_path = args.resume;
    cfg.canonicalize = !args.noCanonical;
    const bool jsonl = args.format == "jsonl";
    cfg.on_found = [&](const Automaton& a, const SyncResult& r) {
        if (jsonl) {
            json j{{"event", "found"},
                   {"length", r.length},
                   {"witness", word_to_string(r.witness)},
                   {"sink", r.sink},
                   {"automaton", automaton_json(a)}};
            std::cout << j.dump() << "\n";
        } else {
            std::cout << "== automaton (shortest length " << r.length << ", witness "
                       << word_to_string(r.witness) << ") ==\n";
            write_automaton(std::cout, a);
        }
        std::cout.flush();
    };
    SearchOutcome outcome = args.kind == "critical" ? search_critical_dfas(cfg)
                                                    : search_pfa_max(cfg);
    if (jsonl) {
        json j{{"event", "summary"},
               {"complete", outcome.complete},
               {"found", outcome.found.size()},
               {"best_length", outcome.best_length},
               {"nodes", outcome.stats.nodes},
               {"pruned_shorter", outcome.stats.pruned_shorter},
               {"pruned_bound", outcome.stats.pruned_bound},
               {"pruned_canonical", outcome.stats.pruned_canonical},
               {"shards_total", outcome.stats.shards_total},
               {"shards_done", outcome.stats.shards_done},
               {"shards_skipped", outcome.stats.shards_skipped}};
        if (outcome.min_symbols >= 0) j["min_symbols"] = outcome.min_symbols;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (outcome.complete ? "search complete" : "search stopped: node budget exhausted")
                  << ": found " << outcome.found.size() << " automata";
        if (outcome.best_length >= 0) std::cout << ", best length " << outcome.best_length;
        if (outcome.min_symbols >= 0) std::cout << ", min symbols " << outcome.min_symbols;
        std::cout << "\n";
        std::cout << "nodes " << outcome.stats.nodes << ", pruned: shorter "
                  << outcome.stats.pruned_shorter << ", bound " << outcome.stats.pruned_bound
                  << ", canonical " << outcome.stats.pruned_canonical << "\n";
        std::cout << "shards: " << outcome.stats.shards_total << " total, "
                  << outcome.stats.shards_done << " done, " << outcome.stats.shards_skipped
                  << " skipped\n";
    }
    return outcome.complete ? 0 : 3;
}

struct OracleArgs {
    std::string which;
    int k = 0;
    int h = 2;
};

int run_oracle(const OracleArgs& args) {
    if (args.which == "fib") {
        std::cout << u128_to_string(fib(args.k)) << "\n";
    } else if (args.which == "rewrite-steps") {
        RewriteSystem sys = make_rewrite_system(args.h);
        std::cout << min_steps_to_terminal(sys, args.k) << "\n";
    } else {  // trace
        for (const TracePair& step : rewrite_trace(args.k))
            std::cout << step.pos << " " << step.rule << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shortest synchronizing words of complete and partial automata"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cGen = app.add_subcommand("generate", "emit an automaton family member");
    cGen->add_option("family", gen.family, "cerny | record-pfa | exp-pfa | exp-pfa-2sym")
        ->required()
        ->check(CLI::IsMember({"cerny", "record-pfa", "exp-pfa", "exp-pfa-2sym"}));
    cGen->add_option("--n", gen.n, "number of states (cerny, record-pfa)");
    cGen->add_option("--k", gen.k, "cycle length (exp-pfa families)");
    cGen->add_option("--height", gen.h, "window height h (default 2)");
    cGen->add_option("--pad-to", gen.padTo, "pad with extra states up to this total");
    cGen->add_option("--qprime", gen.qprime, "passive set of the two-symbol form: empty | a4k")
        ->check(CLI::IsMember({"empty", "a4k"}));
    cGen->add_option("--out", gen.out, "output file (default: stdout)");

    AnalyzeArgs ana;
    auto* cAna = app.add_subcommand("analyze", "analyze an automaton file ('-' for stdin)");
    cAna->add_option("file", ana.file, "automaton in the text format")->required();
    cAna->add_flag("--bound", ana.bound, "also report the extension bound (complete automata)");
    cAna->add_option("--witness", ana.witness, "verify this word instead of searching");
    cAna->add_option("--format", ana.format, "text | jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));

    SearchArgs sea;
    auto* cSea = app.add_subcommand("search", "exhaustive searches over small automata");
    cSea->add_option("kind", sea.kind, "critical | pfa-max")
        ->required()
        ->check(CLI::IsMember({"critical", "pfa-max"}));
    cSea->add_option("--n", sea.n, "number of states")->required();
    cSea->add_option("--target", sea.target,
                     "report automata with shortest length >= target (default: known maximum)");
    cSea->add_option("--jobs", sea.jobs, "worker threads (default 1)");
    cSea->add_option("--budget", sea.budget, "node budget; exit 3 when exhausted");
    cSea->add_option("--resume", sea.resume, "checkpoint file (created/appended, skips done shards)");
    cSea->add_flag("--no-canonical", sea.noCanonical,
                   "do not prune isomorphic branches or deduplicate classes");
    cSea->add_option("--format", sea.format, "text | jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));

    OracleArgs ora;
    auto* cOra = app.add_subcommand("oracle", "rewrite-system and numeric oracles");
    cOra->add_option("which", ora.which, "rewrite-steps | trace | fib")
        ->required()
        ->check(CLI::IsMember({"rewrite-steps", "trace", "fib"}));
    cOra->add_option("--k", ora.k, "string length / index")->required();
    cOra->add_option("--height", ora.h, "window height h (default 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cGen->parsed()) return run_generate(gen);
        if (cAna->parsed()) return run_analyze(ana);
        if (cSea->parsed()) return run_search(sea);
        return run_oracle(ora);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
