#pragma once
// Per-peer history of answered queries, plus the on-disk format used for
// experiment restarts: one tab-separated record per line,
//   query_id <TAB> terms <TAB> downloaded_docs <TAB> positive_peers
// with space-separated id lists (doc and peer lists may be empty), LF endings.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fcaroute/errors.hpp"
#include "fcaroute/fca.hpp"

namespace fcaroute {

using QueryId = Id;
using TermId = Id;
using PeerId = Id;
using DocId = Id;

struct LogEntry {
    QueryId query_id = 0;
    IdSet terms;            // sorted
    IdSet downloaded_docs;  // sorted; empty iff positive_peers empty
    IdSet positive_peers;   // sorted

    bool operator==(const LogEntry&) const = default;
};

inline void validate_entry(const LogEntry& e) {
    if (e.downloaded_docs.empty() != e.positive_peers.empty())
        throw std::invalid_argument(
            "log entry " + std::to_string(e.query_id) +
            ": positive_peers must be nonempty exactly when downloaded_docs is");
}

struct QueryLog {
    std::vector<LogEntry> entries;
    std::size_t watermark = 0;  // entries[0..watermark) are folded into the KB

    bool has_new_entries() const { return watermark < entries.size(); }
};

// Appends with strictly increasing query ids; the watermark does not move.
inline void append_log(QueryLog& log, LogEntry entry) {
    validate_entry(entry);
    if (!log.entries.empty() && entry.query_id <= log.entries.back().query_id)
        throw std::invalid_argument("query id " + std::to_string(entry.query_id) +
                                    " not greater than last logged id");
    log.entries.push_back(std::move(entry));
}

namespace detail {

inline IdSet parse_id_list(const std::string& field, const std::string& file,
                           std::size_t line) {
    IdSet out;
    std::istringstream ss(field);
    std::string tok;
    while (ss >> tok) {
        try {
            unsigned long v = std::stoul(tok);
            out.push_back(static_cast<Id>(v));
        } catch (const std::exception&) {
            throw ParseError(file, line, "bad id '" + tok + "'");
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<std::string> split_tabs(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline void join_ids(std::ostream& os, const IdSet& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) os << ' ';
        os << ids[i];
    }
}

}  // namespace detail

inline void save_query_log(const QueryLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& e : log.entries) {
        out << e.query_id << '\t';
        detail::join_ids(out, e.terms);
        out << '\t';
        detail::join_ids(out, e.downloaded_docs);
        out << '\t';
        detail::join_ids(out, e.positive_peers);
        out << '\n';
    }
}

inline QueryLog load_query_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    QueryLog log;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 4)
            throw ParseError(path, lineno, "expected 4 tab-separated fields, got " +
                                               std::to_string(fields.size()));
        LogEntry e;
        try {
            e.query_id = static_cast<QueryId>(std::stoul(fields[0]));
        } catch (const std::exception&) {
            throw ParseError(path, lineno, "bad query id '" + fields[0] + "'");
        }
        e.terms = detail::parse_id_list(fields[1], path, lineno);
        e.downloaded_docs = detail::parse_id_list(fields[2], path, lineno);
        e.positive_peers = detail::parse_id_list(fields[3], path, lineno);
        try {
            append_log(log, std::move(e));
        } catch (const std::invalid_argument& ex) {
            throw ParseError(path, lineno, ex.what());
        }
    }
    return log;
}

}  // namespace fcaroute
