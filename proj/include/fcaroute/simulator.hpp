#pragma once
// Deterministic overlay simulation: breadth-first query propagation with TTL
// and seen-set cycle detection, conjunctive local search, download logging at
// the origin, scheduled knowledge-base maintenance, and per-interval metrics.
//
// Determinism contract: everything is a pure function of (dataset, config).
// Randomness comes only from per-peer splitmix streams derived from
// (config.seed, peer id); wall-clock time is measured but never fed back.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fcaroute/dataset.hpp"
#include "fcaroute/routing.hpp"
#include "fcaroute/sim_config.hpp"

namespace fcaroute {

struct Peer {
    PeerId id = 0;
    std::vector<PeerId> neighbors;
    std::vector<std::pair<DocId, IdSet>> documents;  // hosted instances
    QueryLog log;
    KnowledgeBase kb;
    std::unordered_set<QueryId> seen_queries;
};

// (peer, doc) instance key; replicas on distinct peers are distinct instances.
inline std::uint64_t instance_key(PeerId peer, DocId doc) {
    return (std::uint64_t(peer) << 32) | doc;
}

struct QueryOutcome {
    std::vector<std::uint64_t> results;  // sorted instance keys
    std::uint64_t messages = 0;          // query forwards only, never responses
    std::vector<PeerId> responders;      // remote peers contributing a match
};

// R(Q) = DPR / DP. Empty DP means the query cannot be scored at all.
inline std::optional<double> recall(const QueryOutcome& outcome,
                                    std::span<const std::uint64_t> dp) {
    if (dp.empty()) return std::nullopt;
    std::size_t hit = 0;
    for (std::uint64_t k : outcome.results)
        if (std::binary_search(dp.begin(), dp.end(), k)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(dp.size());
}

// Downloads happen from remote responders; the origin's own matches count for
// recall but are not downloads, which keeps positive_peers consistent with
// downloaded_docs.
inline LogEntry record_downloads(PeerId origin, const QueryOutcome& outcome,
                                 const Query& query) {
    LogEntry e;
    e.query_id = query.id;
    e.terms = query.terms;
    for (std::uint64_t k : outcome.results) {
        PeerId host = static_cast<PeerId>(k >> 32);
        if (host != origin) e.downloaded_docs.push_back(static_cast<DocId>(k));
    }
    std::sort(e.downloaded_docs.begin(), e.downloaded_docs.end());
    e.downloaded_docs.erase(
        std::unique(e.downloaded_docs.begin(), e.downloaded_docs.end()),
        e.downloaded_docs.end());
    e.positive_peers = IdSet(outcome.responders.begin(), outcome.responders.end());
    std::sort(e.positive_peers.begin(), e.positive_peers.end());
    validate_entry(e);
    return e;
}

// Doc ids on this peer containing every query term.
inline IdSet local_search(const Peer& peer, std::span<const TermId> terms) {
    IdSet out;
    for (const auto& [doc, doc_terms] : peer.documents)
        if (intersection_size(terms, doc_terms) == terms.size()) out.push_back(doc);
    std::sort(out.begin(), out.end());
    return out;
}

struct QueryStats {
    std::uint64_t messages = 0;
    std::optional<double> recall;  // nullopt when DP is empty
    bool answered = false;
};

struct IntervalMetrics {
    std::size_t interval_index = 0;
    double mean_recall = 0.0;       // over queries with nonempty DP
    double mean_messages = 0.0;     // over all queries in the interval
    double kb_concepts_mean = 0.0;  // mean |E1|+|E2| per peer at interval end
    double maintenance_time_mean_ms = 0.0;  // per maintenance event, 0 if none
    std::uint64_t maintenance_work = 0;     // closure ops during the interval
    std::size_t queries_answered = 0;
    std::size_t queries_total = 0;
    std::size_t recall_samples = 0;
};

struct MaintenanceRoundStats {
    std::size_t round = 0;  // 0 = B0, then one per schedule offset
    MaintenanceMode mode = MaintenanceMode::Static;
    double mean_e1_concepts = 0.0;
    double mean_e2_concepts = 0.0;
    std::uint64_t total_work = 0;
    double wall_ms = 0.0;
};

class Simulator {
public:
    Simulator(const Dataset& dataset, const SimConfig& config)
        : config_(config) {
        validate_config(config_);
        if (config_.overlay_size != 0 && config_.overlay_size != dataset.peers.size())
            throw DataError("config overlay_size " +
                            std::to_string(config_.overlay_size) +
                            " does not match dataset peer count " +
                            std::to_string(dataset.peers.size()));
        if (config_.warmup_queries > dataset.queries.size())
            throw DataError("warmup_queries exceeds the dataset query count");

        peers_.reserve(dataset.peers.size());
        for (const auto& ps : dataset.peers) {
            Peer p;
            p.id = ps.id;
            p.neighbors = ps.neighbors;
            peers_.push_back(std::move(p));
            peer_index_.emplace(ps.id, peers_.size() - 1);
        }
        for (const auto& d : dataset.documents)
            peers_[peer_index_.at(d.host)].documents.emplace_back(d.id, d.terms);
        queries_ = dataset.queries;

        rngs_.reserve(peers_.size());
        for (const auto& p : peers_) rngs_.emplace_back(mix_seed(config_.seed, p.id));
        issued_since_b0_.assign(peers_.size(), 0);
        per_peer_next_.assign(peers_.size(), 0);
    }

    const SimConfig& config() const { return config_; }
    std::size_t peer_count() const { return peers_.size(); }

    const Peer& peer(PeerId id) const { return peers_[index_of(id)]; }

    // Ground truth DP for a term set: every matching (peer, doc) instance in
    // the network. Memoized; document placement never changes during a run.
    const std::vector<std::uint64_t>& relevant_set(const IdSet& terms) {
        auto it = dp_cache_.find(terms);
        if (it != dp_cache_.end()) return it->second;
        std::vector<std::uint64_t> dp;
        for (const auto& p : peers_)
            for (DocId d : local_search(p, terms)) dp.push_back(instance_key(p.id, d));
        std::sort(dp.begin(), dp.end());
        return dp_cache_.emplace(terms, std::move(dp)).first->second;
    }

    QueryOutcome propagate(PeerId origin, const Query& query, Strategy strategy) {
        return propagate(origin, query, strategy, strategy);
    }

    QueryOutcome propagate(PeerId origin, const Query& query, Strategy origin_strategy,
                           Strategy intermediate_strategy) {
        std::size_t oi = index_of(origin);
        QueryOutcome out;
        struct Hop {
            std::size_t peer_idx;
            int ttl;  // hops remaining after this receipt
            PeerId sender;
        };
        std::deque<Hop> frontier;

        peers_[oi].seen_queries.insert(query.id);
        evaluate(oi, query, out);
        if (config_.ttl >= 1) {
            for (PeerId t : select_targets(oi, query, origin_strategy, std::nullopt)) {
                ++out.messages;
                frontier.push_back({index_of(t), config_.ttl - 1, origin});
            }
        }

        while (!frontier.empty()) {
            Hop hop = frontier.front();
            frontier.pop_front();
            Peer& p = peers_[hop.peer_idx];
            if (!p.seen_queries.insert(query.id).second) continue;  // cycle
            evaluate(hop.peer_idx, query, out);
            if (hop.ttl <= 0) continue;
            for (PeerId t :
                 select_targets(hop.peer_idx, query, intermediate_strategy, hop.sender)) {
                ++out.messages;
                frontier.push_back({index_of(t), hop.ttl - 1, p.id});
            }
        }

        std::sort(out.results.begin(), out.results.end());
        return out;
    }

    // Full experiment protocol: flooding warm-up while logging, B0 at every
    // peer, then the configured strategy with scheduled maintenance.
    const std::vector<IntervalMetrics>& run() {
        if (ran_) throw std::logic_error("Simulator::run is single-shot");
        ran_ = true;

        if (config_.warmup_queries == 0) maintenance_round(0);

        for (std::size_t qi = 0; qi < queries_.size(); ++qi) {
            const auto& qs = queries_[qi];
            bool warm = qi < config_.warmup_queries;
            Strategy strat = warm ? Strategy::Flooding : config_.strategy;
            Strategy inter = warm ? Strategy::Flooding : config_.effective_intermediate();

            Query q{qs.id, qs.terms, qs.issuer};
            QueryOutcome outcome = propagate(qs.issuer, q, strat, inter);
            std::size_t issuer_idx = index_of(qs.issuer);
            append_log(peers_[issuer_idx].log, record_downloads(qs.issuer, outcome, q));

            QueryStats st;
            st.messages = outcome.messages;
            st.recall = recall(outcome, relevant_set(qs.terms));
            st.answered = !outcome.results.empty();
            per_query_.push_back(st);
            bucket(qi, st);

            if (qi + 1 == config_.warmup_queries) maintenance_round(0);
            if (!warm) schedule_updates(qi);
            if ((qi + 1) % config_.interval == 0) close_interval(qi / config_.interval);
        }
        if (queries_.size() % config_.interval != 0)
            close_interval(queries_.empty() ? 0 : (queries_.size() - 1) / config_.interval);
        return intervals_;
    }

    const std::vector<QueryStats>& query_stats() const { return per_query_; }
    const std::vector<IntervalMetrics>& intervals() const { return intervals_; }
    const std::vector<MaintenanceRoundStats>& maintenance_rounds() const {
        return rounds_;
    }

private:
    std::size_t index_of(PeerId id) const {
        auto it = peer_index_.find(id);
        if (it == peer_index_.end())
            throw std::invalid_argument("unknown peer id " + std::to_string(id));
        return it->second;
    }

    void evaluate(std::size_t idx, const Query& query, QueryOutcome& out) {
        const Peer& p = peers_[idx];
        IdSet docs = local_search(p, query.terms);
        if (docs.empty()) return;
        for (DocId d : docs) out.results.push_back(instance_key(p.id, d));
        if (p.id != query.origin) out.responders.push_back(p.id);
    }

    // Forwarding layer: strategy picks candidates, the layer enforces pmax,
    // never forwards back to the sender, and optionally pads with random
    // neighbors when the knowledge base comes up short.
    std::vector<PeerId> select_targets(std::size_t idx, const Query& query,
                                       Strategy strategy,
                                       std::optional<PeerId> sender) {
        Peer& p = peers_[idx];
        std::vector<PeerId> cands;
        cands.reserve(p.neighbors.size());
        for (PeerId nb : p.neighbors)
            if (!sender || nb != *sender) cands.push_back(nb);

        if (strategy == Strategy::Flooding)
            return flooding_select(cands, config_.pmax, rngs_[idx]);

        LpsOptions opts{config_.sqpc_min_overlap};
        SelectionResult sel = strategy == Strategy::LpsV1
                                  ? lps_select_v1(p.kb, query, config_.pmax, opts)
                                  : lps_select_v2(p.kb, query, config_.pmax, opts);
        std::vector<PeerId> picked;
        for (PeerId t : sel.peers) {
            if (t == p.id || (sender && t == *sender)) continue;
            if (!peer_index_.count(t)) continue;
            picked.push_back(t);
        }
        if (config_.fallback_fill)
            return fallback_fill(std::move(picked), cands, config_.pmax, rngs_[idx]);
        if (picked.size() > static_cast<std::size_t>(config_.pmax))
            picked.resize(static_cast<std::size_t>(config_.pmax));
        return picked;
    }

    void maintenance_round(std::size_t round) {
        MaintenanceRoundStats rs;
        rs.round = round;
        // B0 is always a full build; later rounds follow the configured mode.
        rs.mode = round == 0 ? MaintenanceMode::Static : config_.maintenance_mode;
        double e1_sum = 0.0, e2_sum = 0.0;
        for (auto& p : peers_) {
            MaintenanceStats st = rs.mode == MaintenanceMode::Static
                                      ? p.kb.rebuild_static(p.log)
                                      : p.kb.update_incremental(p.log);
            rs.total_work += st.closure_ops;
            rs.wall_ms += st.wall_ms;
            e1_sum += static_cast<double>(p.kb.e1().size());
            e2_sum += static_cast<double>(p.kb.e2().size());
        }
        rs.mean_e1_concepts = e1_sum / static_cast<double>(peers_.size());
        rs.mean_e2_concepts = e2_sum / static_cast<double>(peers_.size());
        rounds_.push_back(rs);
        pending_work_ += rs.total_work;
        pending_wall_ms_ += rs.wall_ms;
        ++pending_events_;
    }

    void per_peer_update(std::size_t idx) {
        Peer& p = peers_[idx];
        MaintenanceStats st = config_.maintenance_mode == MaintenanceMode::Static
                                  ? p.kb.rebuild_static(p.log)
                                  : p.kb.update_incremental(p.log);
        pending_work_ += st.closure_ops;
        pending_wall_ms_ += st.wall_ms;
        ++pending_events_;
    }

    void schedule_updates(std::size_t qi) {
        if (config_.update_count_mode == UpdateCountMode::Global) {
            std::size_t post = qi + 1 - config_.warmup_queries;
            while (next_update_ < config_.update_schedule.size() &&
                   config_.update_schedule[next_update_] == post) {
                maintenance_round(next_update_ + 1);
                ++next_update_;
            }
        } else {
            // per-peer offsets: count queries issued by each peer after B0
            std::size_t idx = index_of(queries_[qi].issuer);
            std::size_t issued = ++issued_since_b0_[idx];
            std::size_t& k = per_peer_next_[idx];
            if (k < config_.update_schedule.size() &&
                config_.update_schedule[k] == issued) {
                per_peer_update(idx);
                ++k;
            }
        }
    }

    void bucket(std::size_t qi, const QueryStats& st) {
        (void)qi;
        acc_messages_ += static_cast<double>(st.messages);
        acc_total_ += 1;
        if (st.answered) ++acc_answered_;
        if (st.recall) {
            acc_recall_ += *st.recall;
            ++acc_recall_n_;
        }
    }

    void close_interval(std::size_t index) {
        IntervalMetrics m;
        m.interval_index = index;
        m.queries_total = acc_total_;
        m.queries_answered = acc_answered_;
        m.recall_samples = acc_recall_n_;
        m.mean_recall = acc_recall_n_ ? acc_recall_ / static_cast<double>(acc_recall_n_) : 0.0;
        m.mean_messages = acc_total_ ? acc_messages_ / static_cast<double>(acc_total_) : 0.0;
        double concepts = 0.0;
        for (const auto& p : peers_) concepts += static_cast<double>(p.kb.concept_count());
        m.kb_concepts_mean = concepts / static_cast<double>(peers_.size());
        m.maintenance_work = pending_work_;
        m.maintenance_time_mean_ms =
            pending_events_ ? pending_wall_ms_ / static_cast<double>(pending_events_) : 0.0;
        intervals_.push_back(m);
        acc_messages_ = acc_recall_ = 0.0;
        acc_total_ = acc_answered_ = acc_recall_n_ = 0;
        pending_work_ = 0;
        pending_wall_ms_ = 0.0;
        pending_events_ = 0;
    }

    struct TermsHash {
        std::size_t operator()(const IdSet& v) const {
            std::uint64_t h = 1469598103934665603ULL;
            for (Id x : v) {
                h ^= x;
                h *= 1099511628211ULL;
            }
            return static_cast<std::size_t>(h);
        }
    };

    SimConfig config_;
    std::vector<Peer> peers_;
    std::unordered_map<PeerId, std::size_t> peer_index_;
    std::vector<Dataset::QuerySpec> queries_;
    std::vector<Rng> rngs_;
    std::unordered_map<IdSet, std::vector<std::uint64_t>, TermsHash> dp_cache_;

    bool ran_ = false;
    std::vector<QueryStats> per_query_;
    std::vector<IntervalMetrics> intervals_;
    std::vector<MaintenanceRoundStats> rounds_;
    std::size_t next_update_ = 0;
    std::vector<std::size_t> issued_since_b0_;
    std::vector<std::size_t> per_peer_next_;

    double acc_messages_ = 0.0, acc_recall_ = 0.0;
    std::size_t acc_total_ = 0, acc_answered_ = 0, acc_recall_n_ = 0;
    std::uint64_t pending_work_ = 0;
    double pending_wall_ms_ = 0.0;
    std::size_t pending_events_ = 0;
};

}  // namespace fcaroute
