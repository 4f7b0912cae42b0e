#pragma once
// Test-only oracles and generators. The brute-force enumerator walks every
// object subset and closes it, so it shares no code path with NextClosure.

#include <algorithm>
#include <set>
#include <vector>

#include "fcaroute/fca.hpp"
#include "fcaroute/knowledge_base.hpp"
#include "fcaroute/rng.hpp"

namespace oracle {

using fcaroute::FormalConcept;
using fcaroute::FormalContext;
using fcaroute::Id;
using fcaroute::IdSet;

// All concepts as {(A'', A') : A subset of objects}, deduplicated.
// Only viable for small contexts (2^objects subsets).
inline std::vector<FormalConcept> brute_force_concepts(const FormalContext& ctx) {
    const auto& objs = ctx.objects();
    std::set<std::pair<IdSet, IdSet>> found;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << objs.size()); ++mask) {
        IdSet subset;
        for (std::size_t i = 0; i < objs.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) subset.push_back(objs[i]);
        std::sort(subset.begin(), subset.end());
        IdSet intent = fcaroute::derive_intent(ctx, subset);
        IdSet extent = fcaroute::derive_extent(ctx, intent);
        found.emplace(std::move(extent), std::move(intent));
    }
    std::vector<FormalConcept> out;
    for (const auto& [e, i] : found) out.push_back({e, i});
    return out;
}

inline bool same_concept_set(std::vector<FormalConcept> a, std::vector<FormalConcept> b) {
    auto key = [](const FormalConcept& c) { return std::pair(c.extent, c.intent); };
    auto cmp = [&](const FormalConcept& x, const FormalConcept& y) {
        return key(x) < key(y);
    };
    std::sort(a.begin(), a.end(), cmp);
    std::sort(b.begin(), b.end(), cmp);
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Random context with given bounds; density ~ the share of set incidences.
inline FormalContext random_context(fcaroute::Rng& rng, std::size_t max_objects,
                                    std::size_t max_attributes, double density = 0.4) {
    std::size_t n = rng.below(max_objects + 1);
    std::size_t m = rng.below(max_attributes + 1);
    std::vector<Id> objects(n), attributes(m);
    for (std::size_t i = 0; i < n; ++i) objects[i] = static_cast<Id>(100 + i);
    for (std::size_t j = 0; j < m; ++j) attributes[j] = static_cast<Id>(500 + j);
    std::vector<IdSet> rows(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (rng.chance(density)) rows[i].push_back(attributes[j]);
    return FormalContext(std::move(objects), std::move(attributes), rows);
}

inline IdSet random_subset(fcaroute::Rng& rng, const std::vector<Id>& pool,
                           double pick = 0.5) {
    IdSet out;
    for (Id x : pool)
        if (rng.chance(pick)) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

// Random per-peer history: term pool and peer pool small enough that concept
// structure stays rich.
inline fcaroute::QueryLog random_log(fcaroute::Rng& rng, std::size_t max_entries,
                                     std::size_t term_pool, std::size_t peer_pool,
                                     fcaroute::QueryId first_id = 0) {
    fcaroute::QueryLog log;
    std::size_t n = rng.below(max_entries + 1);
    for (std::size_t i = 0; i < n; ++i) {
        fcaroute::LogEntry e;
        e.query_id = first_id + static_cast<fcaroute::QueryId>(i);
        std::size_t nt = 1 + rng.below(3);
        while (e.terms.size() < nt) {
            fcaroute::Id t = static_cast<fcaroute::Id>(rng.below(term_pool));
            if (!std::binary_search(e.terms.begin(), e.terms.end(), t)) {
                e.terms.insert(std::upper_bound(e.terms.begin(), e.terms.end(), t), t);
            }
        }
        if (rng.chance(0.85)) {
            std::size_t np = 1 + rng.below(std::max<std::size_t>(peer_pool / 2, 1));
            while (e.positive_peers.size() < np && e.positive_peers.size() < peer_pool) {
                fcaroute::Id p = static_cast<fcaroute::Id>(1000 + rng.below(peer_pool));
                if (!std::binary_search(e.positive_peers.begin(), e.positive_peers.end(), p))
                    e.positive_peers.insert(
                        std::upper_bound(e.positive_peers.begin(), e.positive_peers.end(), p),
                        p);
            }
            for (std::size_t d = 0; d < e.positive_peers.size(); ++d)
                e.downloaded_docs.push_back(static_cast<fcaroute::Id>(rng.below(50)));
            std::sort(e.downloaded_docs.begin(), e.downloaded_docs.end());
            e.downloaded_docs.erase(
                std::unique(e.downloaded_docs.begin(), e.downloaded_docs.end()),
                e.downloaded_docs.end());
            if (e.downloaded_docs.empty()) e.downloaded_docs.push_back(0);
        }
        fcaroute::append_log(log, std::move(e));
    }
    return log;
}

}  // namespace oracle
