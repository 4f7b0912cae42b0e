#pragma once
// Peer-selection strategies. lps_select_v1 ranks the full set of E1 concepts
// similar to the query before touching E2; lps_select_v2 interleaves the two,
// pulling one best E1 concept at a time and stopping once Pmax distinct peers
// have accumulated. Both route through the same similarity measure and the
// same concept ranking, so they agree whenever v2 runs E1 to exhaustion.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "fcaroute/knowledge_base.hpp"
#include "fcaroute/rng.hpp"

namespace fcaroute {

struct Query {
    QueryId id = 0;
    IdSet terms;  // sorted, nonempty
    PeerId origin = 0;
};

struct RankedConcept {
    const FormalConcept* concept_ptr = nullptr;
    double score = 0.0;  // in [0,1]
};

inline std::size_t intersection_size(std::span<const Id> a, std::span<const Id> b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

inline double jaccard(std::span<const Id> a, std::span<const Id> b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = intersection_size(a, b);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Query/intent similarity: Jaccard over term sets.
inline double similarity(std::span<const Id> query_terms, std::span<const Id> intent) {
    return jaccard(query_terms, intent);
}

namespace detail {

// Deterministic ranking: score desc, then larger extent, then lectic intent,
// then lectic extent (distinct concepts from merged batches can share intents).
inline bool ranks_before(double sa, const FormalConcept& a,
                         double sb, const FormalConcept& b) {
    if (sa != sb) return sa > sb;
    if (a.extent.size() != b.extent.size()) return a.extent.size() > b.extent.size();
    if (a.intent != b.intent) return lectic_less(a.intent, b.intent);
    return lectic_less(a.extent, b.extent);
}

}  // namespace detail

// Best-scoring E1 concept for the query, provided some score is positive.
// Scorer must be a strictly monotone function of set similarity for the
// ranking contract to hold; the default is similarity() itself.
template <typename Scorer>
const FormalConcept* get_concept(std::span<const FormalConcept> e1, const Query& query,
                                 Scorer&& score_fn) {
    const FormalConcept* best = nullptr;
    double best_score = 0.0;
    for (const auto& c : e1) {
        double s = score_fn(query.terms, c.intent);
        if (s <= 0.0) continue;
        if (!best || detail::ranks_before(s, c, best_score, *best)) {
            best = &c;
            best_score = s;
        }
    }
    return best;
}

inline const FormalConcept* get_concept(std::span<const FormalConcept> e1,
                                        const Query& query) {
    return get_concept(e1, query, [](std::span<const Id> a, std::span<const Id> b) {
        return similarity(a, b);
    });
}

// SQPC: E2 concepts whose extent overlaps the given extent by more than
// min_overlap (extent Jaccard), ranked by descending overlap.
inline std::vector<const FormalConcept*> get_similar_concepts(
    std::span<const FormalConcept> e2, std::span<const QueryId> extent,
    double min_overlap = 0.0) {
    std::vector<std::pair<double, const FormalConcept*>> scored;
    for (const auto& c : e2) {
        double j = jaccard(extent, c.extent);
        if (j > min_overlap) scored.emplace_back(j, &c);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return detail::ranks_before(a.first, *a.second, b.first, *b.second);
    });
    std::vector<const FormalConcept*> out;
    out.reserve(scored.size());
    for (auto& [s, c] : scored) out.push_back(c);
    return out;
}

// Ordered union of intents across the ranked SQPC list; first occurrence wins.
inline std::vector<PeerId> get_selected_peers(
    std::span<const FormalConcept* const> sqpc) {
    std::vector<PeerId> out;
    std::unordered_set<PeerId> seen;
    for (const auto* c : sqpc)
        for (PeerId p : c->intent)
            if (seen.insert(p).second) out.push_back(p);
    return out;
}

struct SelectionResult {
    std::vector<PeerId> peers;
    std::size_t e1_visited = 0;  // E1 concepts actually expanded into peers
};

struct LpsOptions {
    double sqpc_min_overlap = 0.0;
};

namespace detail {

inline void accumulate_peers(std::vector<PeerId>& peers,
                             std::unordered_set<PeerId>& seen, PeerId origin,
                             const std::vector<const FormalConcept*>& sqpc) {
    for (const auto* c : sqpc)
        for (PeerId p : c->intent)
            if (p != origin && seen.insert(p).second) peers.push_back(p);
}

}  // namespace detail

// The original selection: rank every similar E1 concept (SQTC), then expand
// each of them against E2 in rank order. Pmax never prunes the search.
inline SelectionResult lps_select_v1(const KnowledgeBase& kb, const Query& query,
                                     int pmax, const LpsOptions& opts = {}) {
    (void)pmax;  // kept in the signature: the improved version uses it
    std::vector<std::pair<double, const FormalConcept*>> sqtc;
    for (const auto& c : kb.e1()) {
        double s = similarity(query.terms, c.intent);
        if (s > 0.0) sqtc.emplace_back(s, &c);
    }
    std::sort(sqtc.begin(), sqtc.end(), [](const auto& a, const auto& b) {
        return detail::ranks_before(a.first, *a.second, b.first, *b.second);
    });

    SelectionResult res;
    std::unordered_set<PeerId> seen;
    for (auto& [score, c] : sqtc) {
        ++res.e1_visited;
        auto sqpc = get_similar_concepts(kb.e2(), c->extent, opts.sqpc_min_overlap);
        detail::accumulate_peers(res.peers, seen, query.origin, sqpc);
    }
    return res;
}

// The Pmax-bounded loop: take the best remaining E1 concept, expand it, stop
// as soon as enough distinct peers accumulated. The final batch may push the
// list past pmax; the forwarding layer truncates.
inline SelectionResult lps_select_v2(const KnowledgeBase& kb, const Query& query,
                                     int pmax, const LpsOptions& opts = {}) {
    SelectionResult res;
    std::unordered_set<PeerId> seen;
    std::span<const FormalConcept> e1(kb.e1());
    std::vector<bool> removed(e1.size(), false);

    auto pick_best = [&]() -> std::size_t {
        std::size_t best = e1.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < e1.size(); ++i) {
            if (removed[i]) continue;
            double s = similarity(query.terms, e1[i].intent);
            if (s <= 0.0) continue;
            if (best == e1.size() ||
                detail::ranks_before(s, e1[i], best_score, e1[best])) {
                best = i;
                best_score = s;
            }
        }
        return best;
    };

    std::size_t idx = pick_best();
    while (idx != e1.size() &&
           res.peers.size() < static_cast<std::size_t>(pmax)) {
        ++res.e1_visited;
        auto sqpc =
            get_similar_concepts(kb.e2(), e1[idx].extent, opts.sqpc_min_overlap);
        detail::accumulate_peers(res.peers, seen, query.origin, sqpc);
        removed[idx] = true;
        idx = pick_best();
    }
    return res;
}

// Flooding baseline: uniform sample of min(pmax, |neighbors|) neighbors.
inline std::vector<PeerId> flooding_select(std::span<const PeerId> neighbors,
                                           int pmax, Rng& rng) {
    std::size_t k = std::min<std::size_t>(neighbors.size(),
                                          static_cast<std::size_t>(pmax));
    std::vector<PeerId> out;
    out.reserve(k);
    for (std::size_t i : rng.sample_indices(neighbors.size(), k))
        out.push_back(neighbors[i]);
    return out;
}

// Pad an undersized selection with random unselected neighbors; truncate an
// oversized one. Selected order is preserved, padding is appended.
inline std::vector<PeerId> fallback_fill(std::vector<PeerId> selected,
                                         std::span<const PeerId> neighbors,
                                         int pmax, Rng& rng) {
    std::size_t cap = static_cast<std::size_t>(pmax);
    if (selected.size() >= cap) {
        selected.resize(cap);
        return selected;
    }
    std::unordered_set<PeerId> taken(selected.begin(), selected.end());
    std::vector<PeerId> pool;
    for (PeerId p : neighbors)
        if (!taken.count(p)) pool.push_back(p);
    rng.shuffle(pool);
    for (PeerId p : pool) {
        if (selected.size() >= cap) break;
        selected.push_back(p);
    }
    return selected;
}

}  // namespace fcaroute
