#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

// Simple undirected graph. Degrees are derived from the edge list.
struct GraphSpec {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges; // unordered pairs, no self-loops

    void validate() const;
    std::vector<int> degrees() const;
};

// Modified cut value: |cut(X)| + sum of deg(a) over a in X.
// Monotone and submodular (each marginal counts edges at most once).
double cut_eval(const GraphSpec& g, const ItemSubset& X);

// G(n, p): each unordered pair is an edge i.i.d. with probability p.
GraphSpec gen_erdos_renyi(int n_vertices, double p, std::uint64_t seed);

class CutOracle final : public SetFunctionOracle {
public:
    explicit CutOracle(GraphSpec g) : g_(std::move(g)) { g_.validate(); }
    int ground_size() const override { return g_.n_vertices; }
    double value(const ItemSubset& X) const override { return cut_eval(g_, X); }
    const GraphSpec& spec() const { return g_; }

private:
    GraphSpec g_;
};

} // namespace edsf
