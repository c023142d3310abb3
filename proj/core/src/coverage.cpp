#include "edsf/coverage.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

void CoverageSpec::validate() const {
    if (n_items < 1) throw std::invalid_argument("CoverageSpec: n_items < 1");
    if (universe_size < 1) throw std::invalid_argument("CoverageSpec: universe_size < 1");
    if (static_cast<int>(membership.size()) != n_items)
        throw std::invalid_argument("CoverageSpec: membership size != n_items");
    if (static_cast<int>(weights.size()) != universe_size)
        throw std::invalid_argument("CoverageSpec: weights size != universe_size");
    for (const auto& m : membership)
        for (int u : m)
            if (u < 0 || u >= universe_size)
                throw std::invalid_argument("CoverageSpec: universe index out of range: " +
                                            std::to_string(u));
    for (double w : weights)
        if (w < 0.0) throw std::invalid_argument("CoverageSpec: negative weight");
}

double coverage_eval(const CoverageSpec& spec, const ItemSubset& B) {
    if (B.n != spec.n_items)
        throw std::invalid_argument("coverage_eval: subset over " + std::to_string(B.n) +
                                    " items, spec has " + std::to_string(spec.n_items));
    std::vector<char> covered(static_cast<std::size_t>(spec.universe_size), 0);
    for (std::uint64_t b = B.bits; b;) {
        const int i = std::countr_zero(b);
        b &= b - 1;
        for (int u : spec.membership[i]) covered[u] = 1;
    }
    double total = 0.0;
    for (int u = 0; u < spec.universe_size; ++u)
        if (covered[u]) total += spec.weights[u];
    return total;
}

CoverageSpec gen_random_coverage(int n_items, int universe_size, double p,
                                 std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("gen_random_coverage: need 0 < p < 1");
    if (n_items < 1 || universe_size < 1)
        throw std::invalid_argument("gen_random_coverage: sizes must be >= 1");
    Rng rng(seed);
    CoverageSpec spec;
    spec.n_items = n_items;
    spec.universe_size = universe_size;
    spec.membership.resize(static_cast<std::size_t>(n_items));
    for (int i = 0; i < n_items; ++i)
        for (int u = 0; u < universe_size; ++u)
            if (rng.bernoulli(p)) spec.membership[i].push_back(u);
    spec.weights.assign(static_cast<std::size_t>(universe_size), 1.0);
    return spec;
}

CoverageOracle::CoverageOracle(CoverageSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    words_ = (spec_.universe_size + 63) / 64;
    item_masks_.assign(static_cast<std::size_t>(spec_.n_items) * words_, 0);
    for (int i = 0; i < spec_.n_items; ++i)
        for (int u : spec_.membership[i])
            item_masks_[static_cast<std::size_t>(i) * words_ + u / 64] |= 1ULL << (u % 64);
    unit_weights_ = true;
    for (double w : spec_.weights)
        if (w != 1.0) { unit_weights_ = false; break; }
}

double CoverageOracle::value(const ItemSubset& B) const {
    if (B.n != spec_.n_items)
        throw std::invalid_argument("CoverageOracle: dimension mismatch");
    double total = 0.0;
    // union of the item masks, one 64-bit word at a time
    for (int w = 0; w < words_; ++w) {
        std::uint64_t acc = 0;
        for (std::uint64_t b = B.bits; b;) {
            const int i = std::countr_zero(b);
            b &= b - 1;
            acc |= item_masks_[static_cast<std::size_t>(i) * words_ + w];
        }
        if (unit_weights_) {
            total += std::popcount(acc);
        } else {
            while (acc) {
                const int bit = std::countr_zero(acc);
                acc &= acc - 1;
                total += spec_.weights[w * 64 + bit];
            }
        }
    }
    return total;
}

} // namespace edsf
