#pragma once
// Per-peer knowledge base B(E1,E2): concepts over the query×term context C1
// and the query×positive-peer context C2, with two maintenance styles.
// Static rebuilds enumerate the whole history; incremental updates enumerate
// only the entries past the log watermark and take the set union with the
// old base. Each concept keeps the generation that produced it so tests can
// re-check closure against the originating batch.

#include <chrono>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "fcaroute/fca.hpp"
#include "fcaroute/query_log.hpp"

namespace fcaroute {

// C1: objects = query ids in entry order, attributes = terms in first-seen order.
inline FormalContext build_context_c1(std::span<const LogEntry> entries) {
    std::vector<Id> objects, attributes;
    std::vector<IdSet> rows;
    std::unordered_set<Id> seen_attr;
    objects.reserve(entries.size());
    rows.reserve(entries.size());
    for (const auto& e : entries) {
        objects.push_back(e.query_id);
        rows.push_back(e.terms);
        for (Id t : e.terms)
            if (seen_attr.insert(t).second) attributes.push_back(t);
    }
    return FormalContext(std::move(objects), std::move(attributes), rows);
}

// C2: same objects, attributes = positive peers in first-seen order.
// Entries without positives contribute an all-zero row.
inline FormalContext build_context_c2(std::span<const LogEntry> entries) {
    std::vector<Id> objects, attributes;
    std::vector<IdSet> rows;
    std::unordered_set<Id> seen_attr;
    objects.reserve(entries.size());
    rows.reserve(entries.size());
    for (const auto& e : entries) {
        objects.push_back(e.query_id);
        rows.push_back(e.positive_peers);
        for (Id p : e.positive_peers)
            if (seen_attr.insert(p).second) attributes.push_back(p);
    }
    return FormalContext(std::move(objects), std::move(attributes), rows);
}

enum class MaintenanceResult { Updated, NoNewEntries };

struct MaintenanceStats {
    MaintenanceResult result = MaintenanceResult::Updated;
    std::uint64_t closure_ops = 0;  // platform-independent work counter
    double wall_ms = 0.0;
};

class KnowledgeBase {
public:
    const std::vector<FormalConcept>& e1() const { return e1_; }
    const std::vector<FormalConcept>& e2() const { return e2_; }
    const std::vector<std::uint32_t>& e1_generations() const { return e1_gen_; }
    const std::vector<std::uint32_t>& e2_generations() const { return e2_gen_; }
    std::uint32_t generation() const { return generation_; }
    const std::vector<QueryId>& object_universe() const { return universe_; }
    std::size_t concept_count() const { return e1_.size() + e2_.size(); }

    struct Batch {
        std::uint32_t generation;
        std::size_t first_entry;  // [first_entry, last_entry) in the log at fold time
        std::size_t last_entry;
    };
    const std::vector<Batch>& batches() const { return batches_; }

    // Full rebuild from the entire history. Advances the watermark to the end.
    MaintenanceStats rebuild_static(QueryLog& log) {
        auto t0 = std::chrono::steady_clock::now();
        EnumStats es;
        std::span<const LogEntry> all(log.entries);
        auto c1 = build_context_c1(all);
        auto c2 = build_context_c2(all);
        e1_ = enumerate_concepts(c1, &es);
        e2_ = enumerate_concepts(c2, &es);
        ++generation_;
        e1_gen_.assign(e1_.size(), generation_);
        e2_gen_.assign(e2_.size(), generation_);
        batches_.assign(1, Batch{generation_, 0, log.entries.size()});
        universe_.clear();
        for (const auto& e : log.entries) universe_.push_back(e.query_id);
        log.watermark = log.entries.size();

        MaintenanceStats st;
        st.closure_ops = es.closures;
        st.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
        return st;
    }

    // Build B+ from the new entries only and union it in. Concept equality is
    // structural (extent, intent); existing concepts are never touched.
    MaintenanceStats update_incremental(QueryLog& log) {
        if (!log.has_new_entries()) {
            MaintenanceStats st;
            st.result = MaintenanceResult::NoNewEntries;
            return st;
        }
        auto t0 = std::chrono::steady_clock::now();
        EnumStats es;
        std::span<const LogEntry> fresh(log.entries.data() + log.watermark,
                                        log.entries.size() - log.watermark);
        auto c1 = build_context_c1(fresh);
        auto c2 = build_context_c2(fresh);
        auto plus_e1 = enumerate_concepts(c1, &es);
        auto plus_e2 = enumerate_concepts(c2, &es);
        ++generation_;
        merge(e1_, e1_gen_, plus_e1);
        merge(e2_, e2_gen_, plus_e2);
        batches_.push_back({generation_, log.watermark, log.entries.size()});
        for (const auto& e : fresh) universe_.push_back(e.query_id);
        log.watermark = log.entries.size();

        MaintenanceStats st;
        st.closure_ops = es.closures;
        st.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
        return st;
    }

private:
    void merge(std::vector<FormalConcept>& dest, std::vector<std::uint32_t>& gens,
               std::vector<FormalConcept>& fresh) {
        std::unordered_set<FormalConcept, ConceptHash> present(dest.begin(), dest.end());
        for (auto& c : fresh) {
            if (present.insert(c).second) {
                dest.push_back(std::move(c));
                gens.push_back(generation_);
            }
        }
    }

    std::vector<FormalConcept> e1_, e2_;
    std::vector<std::uint32_t> e1_gen_, e2_gen_;
    std::uint32_t generation_ = 0;
    std::vector<Batch> batches_;
    std::vector<QueryId> universe_;
};

}  // namespace fcaroute
