#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

// Weighted coverage function: item i covers the universe elements in
// membership[i]; c(B) = total weight of the union of covered elements.
struct CoverageSpec {
    int n_items = 0;
    int universe_size = 0;
    std::vector<std::vector<int>> membership; // per item, universe indices
    std::vector<double> weights;              // per universe element, >= 0

    void validate() const;
};

double coverage_eval(const CoverageSpec& spec, const ItemSubset& B);

// Each (item, universe element) membership is i.i.d. Bernoulli(p); all
// weights are 1. Reproducible for a fixed seed.
CoverageSpec gen_random_coverage(int n_items, int universe_size, double p,
                                 std::uint64_t seed);

// Oracle adapter. Precomputes per-item universe bitmasks, so evaluation is a
// few OR's per item instead of set arithmetic.
class CoverageOracle final : public SetFunctionOracle {
public:
    explicit CoverageOracle(CoverageSpec spec);
    int ground_size() const override { return spec_.n_items; }
    double value(const ItemSubset& B) const override;
    const CoverageSpec& spec() const { return spec_; }

private:
    CoverageSpec spec_;
    int words_ = 0;
    std::vector<std::uint64_t> item_masks_; // n_items * words_
    bool unit_weights_ = false;
};

} // namespace edsf
