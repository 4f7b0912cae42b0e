#pragma once
// Synthetic workload generation and the on-disk dataset contract.
//
// A dataset directory holds three UTF-8 TSV files with LF endings and
// optional '#' comment lines:
//   peers.tsv      peer_id <TAB> comma-separated-neighbor-ids
//   documents.tsv  doc_id <TAB> host_peer_id <TAB> space-separated-terms
//   queries.tsv    query_id <TAB> issuer_peer_id <TAB> space-separated-terms
// One documents.tsv line per hosted replica; every replica of a doc carries
// the same term set. Query file order is the issue order.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fcaroute/errors.hpp"
#include "fcaroute/query_log.hpp"
#include "fcaroute/rng.hpp"

namespace fcaroute {

struct Dataset {
    struct PeerSpec {
        PeerId id;
        std::vector<PeerId> neighbors;  // sorted, symmetric, no self-loops
        bool operator==(const PeerSpec&) const = default;
    };
    struct DocInstance {
        DocId id;
        PeerId host;
        IdSet terms;
        bool operator==(const DocInstance&) const = default;
    };
    struct QuerySpec {
        QueryId id;
        PeerId issuer;
        IdSet terms;
        bool operator==(const QuerySpec&) const = default;
    };

    std::vector<PeerSpec> peers;
    std::vector<DocInstance> documents;
    std::vector<QuerySpec> queries;

    bool operator==(const Dataset&) const = default;
};

struct GenParams {
    std::size_t n_peers = 100;
    std::size_t n_docs = 2000;
    std::size_t n_queries = 5000;
    std::size_t n_topics = 20;
    std::size_t terms_per_topic = 50;
    std::size_t doc_terms = 8;
    std::size_t query_terms = 3;
    std::size_t replication_factor = 3;  // total hosting peers per doc
    std::size_t degree = 4;              // random regular topology
    double zipf_exponent = 1.0;          // topic and in-topic doc popularity
    double doc_topic_locality = 0.8;     // P(doc drawn from host's home topic)
    double replica_topic_bias = 0.7;     // P(replica lands on a same-topic peer)
    std::uint64_t seed = 1;
};

inline void validate_params(const GenParams& p) {
    auto fail = [](const std::string& m) { throw DataError("gen params: " + m); };
    if (p.n_peers == 0) fail("n_peers must be positive");
    if (p.n_topics == 0) fail("n_topics must be positive");
    if (p.terms_per_topic == 0) fail("terms_per_topic must be positive");
    if (p.doc_terms == 0) fail("doc_terms must be positive");
    if (p.query_terms == 0) fail("query_terms must be positive");
    if (p.replication_factor == 0) fail("replication_factor must be positive");
    if (p.degree >= p.n_peers && !(p.degree == 0 && p.n_peers == 1))
        fail("degree (" + std::to_string(p.degree) +
             ") must be less than n_peers (" + std::to_string(p.n_peers) + ")");
    if (p.n_peers > 1 && p.degree == 0)
        fail("degree 0 cannot form a connected topology over " +
             std::to_string(p.n_peers) + " peers");
    if ((p.n_peers * p.degree) % 2 != 0)
        fail("n_peers * degree must be even for a regular topology");
    if (p.doc_terms > p.terms_per_topic)
        fail("doc_terms cannot exceed terms_per_topic");
    if (p.query_terms > p.doc_terms)
        std::cerr << "warning: query_terms > doc_terms; queries will use whole "
                     "document term sets\n";
}

namespace detail {

// Random regular graph by stub matching; rejected on self-loop, multi-edge,
// or disconnectedness, then retried with fresh randomness.
inline std::vector<std::vector<PeerId>> random_regular_graph(std::size_t n,
                                                             std::size_t degree,
                                                             Rng& rng) {
    if (degree == 0) return std::vector<std::vector<PeerId>>(n);
    const int max_attempts = 500;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::size_t> stubs;
        stubs.reserve(n * degree);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = 0; k < degree; ++k) stubs.push_back(v);
        rng.shuffle(stubs);

        std::vector<std::unordered_set<std::size_t>> adj(n);
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            std::size_t a = stubs[i], b = stubs[i + 1];
            if (a == b || adj[a].count(b)) { ok = false; break; }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        if (!ok) continue;

        // connectivity
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[v])
                if (!seen[w]) { seen[w] = 1; ++reached; stack.push_back(w); }
        }
        if (reached != n) continue;

        std::vector<std::vector<PeerId>> out(n);
        for (std::size_t v = 0; v < n; ++v) {
            out[v].assign(adj[v].begin(), adj[v].end());
            std::sort(out[v].begin(), out[v].end());
        }
        return out;
    }
    throw DataError("could not realize a connected " + std::to_string(degree) +
                    "-regular topology over " + std::to_string(n) + " peers");
}

inline IdSet sample_distinct(std::span<const Id> pool, std::size_t k, Rng& rng) {
    IdSet out;
    for (std::size_t i : rng.sample_indices(pool.size(), k)) out.push_back(pool[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Topical synthetic workload. Topics own disjoint term pools; peers have a
// home topic; documents draw their terms from one topic (usually the host's);
// replicas land mostly on same-topic peers; queries pick a Zipf-popular topic,
// then a Zipf-popular document of it, and take a few of its terms. That gives
// future queries term overlap with past ones, which is what history-based
// selection feeds on.
inline Dataset generate(const GenParams& p) {
    validate_params(p);
    Dataset ds;
    Rng rng(mix_seed(p.seed, 0x6763656eULL));  // "gcen"

    // topology
    auto adj = detail::random_regular_graph(p.n_peers, p.degree, rng);
    ds.peers.resize(p.n_peers);
    for (std::size_t v = 0; v < p.n_peers; ++v) {
        ds.peers[v].id = static_cast<PeerId>(v);
        ds.peers[v].neighbors = adj[v];
    }

    // disjoint topic term pools
    std::vector<IdSet> topic_terms(p.n_topics);
    for (std::size_t t = 0; t < p.n_topics; ++t) {
        topic_terms[t].resize(p.terms_per_topic);
        std::iota(topic_terms[t].begin(), topic_terms[t].end(),
                  static_cast<Id>(t * p.terms_per_topic));
    }

    std::vector<std::size_t> home(p.n_peers);
    std::vector<std::vector<PeerId>> peers_of_topic(p.n_topics);
    for (std::size_t v = 0; v < p.n_peers; ++v) {
        home[v] = v % p.n_topics;
        peers_of_topic[home[v]].push_back(static_cast<PeerId>(v));
    }

    // documents with replication
    std::vector<std::size_t> doc_topic(p.n_docs);
    std::vector<std::vector<DocId>> docs_of_topic(p.n_topics);
    std::vector<IdSet> doc_term_sets(p.n_docs);
    for (std::size_t d = 0; d < p.n_docs; ++d) {
        PeerId host = static_cast<PeerId>(rng.below(p.n_peers));
        std::size_t topic = rng.chance(p.doc_topic_locality)
                                ? home[host]
                                : static_cast<std::size_t>(rng.below(p.n_topics));
        doc_topic[d] = topic;
        docs_of_topic[topic].push_back(static_cast<DocId>(d));
        doc_term_sets[d] = detail::sample_distinct(topic_terms[topic], p.doc_terms, rng);

        std::vector<PeerId> hosts{host};
        std::unordered_set<PeerId> taken{host};
        const auto& same_topic = peers_of_topic[topic];
        int guard = 0;
        while (hosts.size() < std::min(p.replication_factor, p.n_peers) &&
               guard++ < 1000) {
            PeerId cand;
            if (!same_topic.empty() && rng.chance(p.replica_topic_bias))
                cand = same_topic[rng.below(same_topic.size())];
            else
                cand = static_cast<PeerId>(rng.below(p.n_peers));
            if (taken.insert(cand).second) hosts.push_back(cand);
        }
        for (PeerId h : hosts)
            ds.documents.push_back({static_cast<DocId>(d), h, doc_term_sets[d]});
    }

    // queries
    ZipfSampler topic_zipf(p.n_topics, p.zipf_exponent);
    std::vector<std::optional<ZipfSampler>> doc_zipf(p.n_topics);
    for (std::size_t t = 0; t < p.n_topics; ++t)
        if (!docs_of_topic[t].empty())
            doc_zipf[t].emplace(docs_of_topic[t].size(), p.zipf_exponent);

    for (std::size_t q = 0; q < p.n_queries; ++q) {
        Dataset::QuerySpec spec;
        spec.id = static_cast<QueryId>(q);
        spec.issuer = static_cast<PeerId>(rng.below(p.n_peers));
        std::size_t topic = topic_zipf.draw(rng);
        if (docs_of_topic[topic].empty()) {
            // topic without documents: fall back to raw topic terms
            spec.terms = detail::sample_distinct(topic_terms[topic],
                                                 std::min(p.query_terms, p.terms_per_topic),
                                                 rng);
        } else {
            DocId d = docs_of_topic[topic][doc_zipf[topic]->draw(rng)];
            const auto& terms = doc_term_sets[d];
            spec.terms = detail::sample_distinct(
                terms, std::min(p.query_terms, terms.size()), rng);
        }
        ds.queries.push_back(std::move(spec));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// dataset I/O

namespace detail {

inline Id parse_id(const std::string& tok, const std::string& file, std::size_t line) {
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return static_cast<Id>(v);
    } catch (const std::exception&) {
        throw ParseError(file, line, "bad id '" + tok + "'");
    }
}

inline std::vector<PeerId> parse_comma_ids(const std::string& field,
                                           const std::string& file, std::size_t line) {
    std::vector<PeerId> out;
    std::string tok;
    std::istringstream ss(field);
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(parse_id(tok, file, line));
    return out;
}

template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            throw ParseError(path, lineno, "CRLF line ending; expected LF");
        if (line.empty() || line[0] == '#') continue;
        fn(split_tabs(line), lineno);
    }
}

}  // namespace detail

inline void save_dataset(const Dataset& ds, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "peers.tsv", std::ios::binary);
        if (!out) throw DataError("cannot write peers.tsv in " + dir);
        for (const auto& p : ds.peers) {
            out << p.id << '\t';
            for (std::size_t i = 0; i < p.neighbors.size(); ++i) {
                if (i) out << ',';
                out << p.neighbors[i];
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(fs::path(dir) / "documents.tsv", std::ios::binary);
        if (!out) throw DataError("cannot write documents.tsv in " + dir);
        for (const auto& d : ds.documents) {
            out << d.id << '\t' << d.host << '\t';
            detail::join_ids(out, d.terms);
            out << '\n';
        }
    }
    {
        std::ofstream out(fs::path(dir) / "queries.tsv", std::ios::binary);
        if (!out) throw DataError("cannot write queries.tsv in " + dir);
        for (const auto& q : ds.queries) {
            out << q.id << '\t' << q.issuer << '\t';
            detail::join_ids(out, q.terms);
            out << '\n';
        }
    }
}

// Load with full referential validation: the simulator may assume the result
// is consistent and never re-checks mid-run.
inline Dataset load_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    Dataset ds;
    std::string peers_path = (fs::path(dir) / "peers.tsv").string();
    std::string docs_path = (fs::path(dir) / "documents.tsv").string();
    std::string queries_path = (fs::path(dir) / "queries.tsv").string();

    std::unordered_map<PeerId, std::size_t> peer_index;
    detail::for_each_record(peers_path, [&](std::vector<std::string> f, std::size_t ln) {
        if (f.size() != 2)
            throw ParseError(peers_path, ln, "expected 2 tab-separated fields");
        Dataset::PeerSpec p;
        p.id = detail::parse_id(f[0], peers_path, ln);
        p.neighbors = detail::parse_comma_ids(f[1], peers_path, ln);
        std::sort(p.neighbors.begin(), p.neighbors.end());
        if (std::adjacent_find(p.neighbors.begin(), p.neighbors.end()) !=
            p.neighbors.end())
            throw ParseError(peers_path, ln, "duplicate neighbor entry");
        if (!peer_index.emplace(p.id, ds.peers.size()).second)
            throw ParseError(peers_path, ln,
                             "duplicate peer id " + std::to_string(p.id));
        ds.peers.push_back(std::move(p));
    });

    for (const auto& p : ds.peers) {
        for (PeerId nb : p.neighbors) {
            if (nb == p.id)
                throw DataError("peers.tsv: peer " + std::to_string(p.id) +
                                " lists itself as neighbor");
            auto it = peer_index.find(nb);
            if (it == peer_index.end())
                throw DataError("peers.tsv: peer " + std::to_string(p.id) +
                                " references unknown peer " + std::to_string(nb));
            const auto& back = ds.peers[it->second].neighbors;
            if (!std::binary_search(back.begin(), back.end(), p.id))
                throw DataError("peers.tsv: neighbor relation not symmetric between " +
                                std::to_string(p.id) + " and " + std::to_string(nb));
        }
    }

    std::unordered_map<DocId, IdSet> doc_terms;
    std::unordered_set<std::uint64_t> placements;
    detail::for_each_record(docs_path, [&](std::vector<std::string> f, std::size_t ln) {
        if (f.size() != 3)
            throw ParseError(docs_path, ln, "expected 3 tab-separated fields");
        Dataset::DocInstance d;
        d.id = detail::parse_id(f[0], docs_path, ln);
        d.host = detail::parse_id(f[1], docs_path, ln);
        d.terms = detail::parse_id_list(f[2], docs_path, ln);
        if (!peer_index.count(d.host))
            throw ParseError(docs_path, ln,
                             "unknown host peer " + std::to_string(d.host));
        if (d.terms.empty())
            throw ParseError(docs_path, ln, "document with no terms");
        auto [it, fresh] = doc_terms.emplace(d.id, d.terms);
        if (!fresh && it->second != d.terms)
            throw ParseError(docs_path, ln,
                             "doc " + std::to_string(d.id) +
                                 " replicated with differing term sets");
        std::uint64_t key = (std::uint64_t(d.host) << 32) | d.id;
        if (!placements.insert(key).second)
            throw ParseError(docs_path, ln, "doc " + std::to_string(d.id) +
                                                " hosted twice on peer " +
                                                std::to_string(d.host));
        ds.documents.push_back(std::move(d));
    });

    std::unordered_map<PeerId, QueryId> last_issued;
    std::unordered_set<QueryId> query_ids;
    detail::for_each_record(queries_path, [&](std::vector<std::string> f, std::size_t ln) {
        if (f.size() != 3)
            throw ParseError(queries_path, ln, "expected 3 tab-separated fields");
        Dataset::QuerySpec q;
        q.id = detail::parse_id(f[0], queries_path, ln);
        q.issuer = detail::parse_id(f[1], queries_path, ln);
        q.terms = detail::parse_id_list(f[2], queries_path, ln);
        if (!peer_index.count(q.issuer))
            throw ParseError(queries_path, ln,
                             "unknown issuer peer " + std::to_string(q.issuer));
        if (q.terms.empty())
            throw ParseError(queries_path, ln, "query with no terms");
        if (!query_ids.insert(q.id).second)
            throw ParseError(queries_path, ln,
                             "duplicate query id " + std::to_string(q.id));
        auto it = last_issued.find(q.issuer);
        if (it != last_issued.end() && q.id <= it->second)
            throw ParseError(queries_path, ln,
                             "query ids not increasing for issuer " +
                                 std::to_string(q.issuer));
        last_issued[q.issuer] = q.id;
        ds.queries.push_back(std::move(q));
    });

    return ds;
}

}  // namespace fcaroute
