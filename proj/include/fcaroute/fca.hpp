#pragma once
// Formal Concept Analysis primitives: binary contexts, the two derivation
// operators, and exhaustive concept enumeration via Ganter's NextClosure.
// Knows nothing about peers or queries; objects and attributes are opaque ids.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fcaroute/bitset.hpp"

namespace fcaroute {

using Id = std::uint32_t;
using IdSet = std::vector<Id>;  // sorted ascending, duplicate-free

// (extent, intent), each closed under the other's derivation.
struct FormalConcept {
    IdSet extent;
    IdSet intent;

    bool operator==(const FormalConcept& o) const {
        return extent == o.extent && intent == o.intent;
    }
};

struct ConceptHash {
    std::size_t operator()(const FormalConcept& c) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        mix(c.extent.size());
        for (Id x : c.extent) mix(x);
        mix(0xffffffffULL);
        for (Id x : c.intent) mix(x);
        return static_cast<std::size_t>(h);
    }
};

// Lectic comparison of two sorted id sets: the set owning the smallest
// element of the symmetric difference is the lectically larger one.
// Total order; ties only on equal sets.
inline bool lectic_less(std::span<const Id> a, std::span<const Id> b) {
    std::size_t i = 0, n = std::min(a.size(), b.size());
    while (i < n && a[i] == b[i]) ++i;
    if (i == n) return a.size() < b.size();  // proper prefix is smaller
    return a[i] > b[i];
}

// Binary incidence relation over declared objects and attributes.
// Orderings are declaration order and stay stable; rows/columns are bitsets.
class FormalContext {
public:
    FormalContext() = default;

    // Bulk build: all rows sized once. per_object_attrs is aligned to objects.
    FormalContext(std::vector<Id> objects, std::vector<Id> attributes,
                  std::span<const IdSet> per_object_attrs)
        : objects_(std::move(objects)), attributes_(std::move(attributes)) {
        for (std::size_t i = 0; i < objects_.size(); ++i) {
            if (!obj_index_.emplace(objects_[i], i).second)
                throw std::invalid_argument("duplicate object id " +
                                            std::to_string(objects_[i]));
        }
        for (std::size_t i = 0; i < attributes_.size(); ++i) {
            if (!attr_index_.emplace(attributes_[i], i).second)
                throw std::invalid_argument("duplicate attribute id " +
                                            std::to_string(attributes_[i]));
        }
        rows_.assign(objects_.size(), Bitset(attributes_.size()));
        cols_.assign(attributes_.size(), Bitset(objects_.size()));
        for (std::size_t oi = 0; oi < per_object_attrs.size(); ++oi) {
            for (Id attr : per_object_attrs[oi]) {
                std::size_t ai = attribute_index(attr);
                rows_[oi].set(ai);
                cols_[ai].set(oi);
            }
        }
    }

    void add_object(Id id) {
        if (obj_index_.count(id))
            throw std::invalid_argument("duplicate object id " + std::to_string(id));
        obj_index_.emplace(id, objects_.size());
        objects_.push_back(id);
        rows_.emplace_back(attributes_.size());
        for (auto& col : cols_) col = grow(col, objects_.size());
    }

    void add_attribute(Id id) {
        if (attr_index_.count(id))
            throw std::invalid_argument("duplicate attribute id " + std::to_string(id));
        attr_index_.emplace(id, attributes_.size());
        attributes_.push_back(id);
        cols_.emplace_back(objects_.size());
        for (auto& row : rows_) row = grow(row, attributes_.size());
    }

    void set_incidence(Id obj, Id attr) {
        std::size_t oi = object_index(obj);
        std::size_t ai = attribute_index(attr);
        rows_[oi].set(ai);
        cols_[ai].set(oi);
    }

    std::size_t object_count() const { return objects_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }
    const std::vector<Id>& objects() const { return objects_; }
    const std::vector<Id>& attributes() const { return attributes_; }

    bool incident(Id obj, Id attr) const {
        return rows_[object_index(obj)].test(attribute_index(attr));
    }

    std::size_t object_index(Id id) const {
        auto it = obj_index_.find(id);
        if (it == obj_index_.end())
            throw std::invalid_argument("unknown object id " + std::to_string(id));
        return it->second;
    }

    std::size_t attribute_index(Id id) const {
        auto it = attr_index_.find(id);
        if (it == attr_index_.end())
            throw std::invalid_argument("unknown attribute id " + std::to_string(id));
        return it->second;
    }

    const Bitset& row(std::size_t obj_idx) const { return rows_[obj_idx]; }
    const Bitset& col(std::size_t attr_idx) const { return cols_[attr_idx]; }

    // Index-space derivations. Empty input yields the full opposite side.
    Bitset intent_of(const Bitset& objs) const {
        Bitset out(attributes_.size(), true);
        objs.for_each_set([&](std::size_t oi) { out &= rows_[oi]; });
        return out;
    }

    Bitset extent_of(const Bitset& attrs) const {
        Bitset out(objects_.size(), true);
        attrs.for_each_set([&](std::size_t ai) { out &= cols_[ai]; });
        return out;
    }

    IdSet object_ids(const Bitset& objs) const {
        IdSet out;
        out.reserve(objs.count());
        objs.for_each_set([&](std::size_t i) { out.push_back(objects_[i]); });
        std::sort(out.begin(), out.end());
        return out;
    }

    IdSet attribute_ids(const Bitset& attrs) const {
        IdSet out;
        out.reserve(attrs.count());
        attrs.for_each_set([&](std::size_t i) { out.push_back(attributes_[i]); });
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static Bitset grow(const Bitset& b, std::size_t nbits) {
        Bitset out(nbits);
        b.for_each_set([&](std::size_t i) { out.set(i); });
        return out;
    }

    std::vector<Id> objects_;
    std::vector<Id> attributes_;
    std::unordered_map<Id, std::size_t> obj_index_;
    std::unordered_map<Id, std::size_t> attr_index_;
    std::vector<Bitset> rows_;
    std::vector<Bitset> cols_;
};

// Attributes shared by every object in objs; all attributes for empty objs.
inline IdSet derive_intent(const FormalContext& ctx, std::span<const Id> objs) {
    Bitset sel(ctx.object_count());
    for (Id id : objs) sel.set(ctx.object_index(id));
    return ctx.attribute_ids(ctx.intent_of(sel));
}

// Objects possessing every attribute in attrs; all objects for empty attrs.
inline IdSet derive_extent(const FormalContext& ctx, std::span<const Id> attrs) {
    Bitset sel(ctx.attribute_count());
    for (Id id : attrs) sel.set(ctx.attribute_index(id));
    return ctx.object_ids(ctx.extent_of(sel));
}

struct EnumStats {
    std::uint64_t closures = 0;  // closure evaluations performed
};

// All formal concepts, intents in lectic order. NextClosure over attribute
// sets: closure(B) = intent(extent(B)); the candidate step A (+) i keeps
// A's prefix below i and is accepted iff the closure adds nothing below i.
inline std::vector<FormalConcept> enumerate_concepts(const FormalContext& ctx,
                                                     EnumStats* stats = nullptr) {
    const std::size_t m = ctx.attribute_count();
    std::uint64_t closures = 0;

    auto closure = [&](const Bitset& attrs, Bitset& extent_out) {
        ++closures;
        extent_out = ctx.extent_of(attrs);
        return ctx.intent_of(extent_out);
    };

    std::vector<FormalConcept> out;
    Bitset extent;
    Bitset current = closure(Bitset(m), extent);
    out.push_back({ctx.object_ids(extent), ctx.attribute_ids(current)});

    while (true) {
        bool advanced = false;
        for (std::size_t i = m; i-- > 0;) {
            if (current.test(i)) continue;
            Bitset candidate(m);
            for (std::size_t j = 0; j < i; ++j)
                if (current.test(j)) candidate.set(j);
            candidate.set(i);
            Bitset ext;
            Bitset closed = closure(candidate, ext);
            if (!closed.has_extra_below(current, i)) {
                current = closed;
                out.push_back({ctx.object_ids(ext), ctx.attribute_ids(current)});
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }

    if (stats) stats->closures += closures;
    return out;
}

}  // namespace fcaroute
