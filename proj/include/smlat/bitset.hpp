#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace smlat {

// Dense set of small integer indices over a fixed universe [0, n).
// Used for edge sets (matchings) and rotation-id sets (ideals).
class BitSet {
public:
    BitSet() = default;
    explicit BitSet(int universe) : n_(universe), blocks_((universe + 63) / 64, 0) {}

    static BitSet single(int universe, int i) {
        BitSet s(universe);
        s.set(i);
        return s;
    }

    int universe() const { return n_; }

    bool test(int i) const { return (blocks_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { blocks_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(int i) { blocks_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

    int count() const {
        int c = 0;
        for (auto b : blocks_) c += __builtin_popcountll(b);
        return c;
    }
    bool any() const {
        for (auto b : blocks_) if (b) return true;
        return false;
    }
    bool none() const { return !any(); }

    BitSet& operator|=(const BitSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
        return *this;
    }
    BitSet& operator&=(const BitSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= o.blocks_[i];
        return *this;
    }
    // set difference
    BitSet& operator-=(const BitSet& o) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= ~o.blocks_[i];
        return *this;
    }

    friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
    friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }
    friend BitSet operator-(BitSet a, const BitSet& b) { return a -= b; }

    bool operator==(const BitSet& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }
    bool operator!=(const BitSet& o) const { return !(*this == o); }
    // total order for canonical sorting
    bool operator<(const BitSet& o) const { return blocks_ < o.blocks_; }

    bool is_subset_of(const BitSet& o) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & ~o.blocks_[i]) return false;
        return true;
    }
    bool intersects(const BitSet& o) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & o.blocks_[i]) return true;
        return false;
    }

    // first set index >= from, or -1
    int next(int from = 0) const {
        if (from >= n_) return -1;
        int blk = from >> 6;
        std::uint64_t cur = blocks_[blk] & (~std::uint64_t(0) << (from & 63));
        while (true) {
            if (cur) return (blk << 6) + __builtin_ctzll(cur);
            if (++blk >= (int)blocks_.size()) return -1;
            cur = blocks_[blk];
        }
    }

    template <typename Fn>
    void for_each(Fn fn) const {
        for (int i = next(0); i >= 0; i = next(i + 1)) fn(i);
    }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(count());
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<int>()(n_);
        for (auto b : blocks_) h = h * 1000003u ^ std::hash<std::uint64_t>()(b);
        return h;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> blocks_;
};

struct BitSetHash {
    std::size_t operator()(const BitSet& s) const { return s.hash(); }
};

} // namespace smlat
