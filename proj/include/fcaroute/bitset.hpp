#pragma once
// Fixed-width dynamic bitset. Word-level AND/OR is what makes context
// derivation cheap; nothing here knows about FCA.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fcaroute {

class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t nbits, bool fill = false)
        : nbits_(nbits), words_((nbits + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set_all() {
        for (auto& w : words_) w = ~std::uint64_t{0};
        trim();
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool none() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool operator==(const Bitset& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    // True iff some bit below `limit` is set here but not in `o`.
    // This is the canonicity test NextClosure needs.
    bool has_extra_below(const Bitset& o, std::size_t limit) const {
        std::size_t full = limit >> 6;
        for (std::size_t i = 0; i < full; ++i)
            if (words_[i] & ~o.words_[i]) return true;
        std::size_t rem = limit & 63;
        if (rem) {
            std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
            if (words_[full] & ~o.words_[full] & mask) return true;
        }
        return false;
    }

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                std::uint64_t low = w & (~w + 1);
                fn((wi << 6) + static_cast<std::size_t>(__builtin_ctzll(w)));
                w ^= low;
            }
        }
    }

private:
    void trim() {
        std::size_t rem = nbits_ & 63;
        if (rem && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace fcaroute
