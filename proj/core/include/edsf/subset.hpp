#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace edsf {

// A subset of the ground set {0, ..., n-1}, stored as a bitmask.
// n is carried along so dimension mismatches are caught at the call site.
struct ItemSubset {
    int n = 0;
    std::uint64_t bits = 0;

    ItemSubset() = default;
    ItemSubset(int n_, std::uint64_t bits_) : n(n_), bits(bits_) {
        if (n_ < 1 || n_ > 63)
            throw std::invalid_argument("ItemSubset: n out of range: " + std::to_string(n_));
        if (n_ < 64 && (bits_ >> n_) != 0)
            throw std::invalid_argument("ItemSubset: bits outside ground set");
    }

    static ItemSubset empty_set(int n) { return ItemSubset(n, 0); }
    static ItemSubset full_set(int n) {
        return ItemSubset(n, n >= 64 ? ~0ULL : ((1ULL << n) - 1));
    }
    static ItemSubset singleton(int n, int i) { return ItemSubset(n, 1ULL << i); }

    bool contains(int i) const { return (bits >> i) & 1ULL; }
    int count() const { return std::popcount(bits); }
    bool empty() const { return bits == 0; }

    ItemSubset with(int i) const { return ItemSubset(n, bits | (1ULL << i)); }
    ItemSubset without(int i) const { return ItemSubset(n, bits & ~(1ULL << i)); }

    bool is_subset_of(const ItemSubset& other) const {
        return n == other.n && (bits & ~other.bits) == 0;
    }

    friend bool operator==(const ItemSubset&, const ItemSubset&) = default;

    std::vector<int> items() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (std::uint64_t b = bits; b;) {
            int i = std::countr_zero(b);
            out.push_back(i);
            b &= b - 1;
        }
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i : items()) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }
};

} // namespace edsf
