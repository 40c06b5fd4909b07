#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <fstream>

#include "automaton.hpp"

namespace synchro {

/// Parse failure with the 1-based input line that caused it.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

/// Text format:
///   # name            (optional comment lines; the first one names the automaton)
///   n m
///   m rows of n entries, each a 0-based state or `-` for undefined
inline Automaton read_automaton(std::istream& in) {
    std::string line;
    std::string name;
    bool have_name = false;
    int lineno = 0;

    auto next_content_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (line[i] == '#') {
                if (!have_name) {
                    std::size_t j = i + 1;
                    if (j < line.size() && line[j] == ' ') ++j;
                    name = line.substr(j);
                    while (!name.empty() && (name.back() == '\r' || name.back() == ' '))
                        name.pop_back();
                    have_name = true;
                }
                continue;
            }
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_content_line(header)) throw ParseError(lineno, "missing header line");
    std::istringstream hs(header);
    int n = 0, m = 0;
    if (!(hs >> n >> m)) throw ParseError(lineno, "header must be `n m`");
    std::string extra;
    if (hs >> extra) throw ParseError(lineno, "trailing tokens after `n m`");
    if (n < 1) throw ParseError(lineno, "state count must be positive");
    if (m < 1) throw ParseError(lineno, "symbol count must be positive");

    std::vector<std::vector<int>> table;
    table.reserve(m);
    for (int sym = 0; sym < m; ++sym) {
        std::string row_line;
        if (!next_content_line(row_line))
            throw ParseError(lineno, "expected " + std::to_string(m) + " symbol rows");
        std::istringstream rs(row_line);
        std::vector<int> row;
        row.reserve(n);
        std::string tok;
        while (rs >> tok) {
            if (tok == "-") {
                row.push_back(kUndefined);
            } else {
                try {
                    std::size_t used = 0;
                    int v = std::stoi(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                    if (v < 0 || v >= n)
                        throw ParseError(lineno, "state " + tok + " out of range 0.." +
                                                     std::to_string(n - 1));
                    row.push_back(v);
                } catch (const ParseError&) {
                    throw;
                } catch (const std::exception&) {
                    throw ParseError(lineno, "bad entry `" + tok + "`");
                }
            }
        }
        if (static_cast<int>(row.size()) != n)
            throw ParseError(lineno, "expected " + std::to_string(n) + " entries, got " +
                                         std::to_string(row.size()));
        table.push_back(std::move(row));
    }
    Automaton a{n, std::move(table), std::move(name)};
    return a;
}

inline void write_automaton(std::ostream& out, const Automaton& a) {
    if (!a.name.empty()) out << "# " << a.name << '\n';
    out << a.states << ' ' << a.symbols() << '\n';
    for (const auto& row : a.table) {
        for (int q = 0; q < a.states; ++q) {
            if (q) out << ' ';
            if (row[q] == kUndefined) out << '-';
            else out << row[q];
        }
        out << '\n';
    }
}

inline std::string to_text(const Automaton& a) {
    std::ostringstream os;
    write_automaton(os, a);
    return os.str();
}

inline Automaton from_text(const std::string& text) {
    std::istringstream is(text);
    return read_automaton(is);
}

inline Automaton read_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_automaton(in);
}

inline void write_automaton_file(const std::string& path, const Automaton& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_automaton(out, a);
}

}  // namespace synchro
