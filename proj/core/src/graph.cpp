#include "edsf/graph.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

void GraphSpec::validate() const {
    if (n_vertices < 1) throw std::invalid_argument("GraphSpec: n_vertices < 1");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices)
            throw std::invalid_argument("GraphSpec: vertex index out of range");
        if (u == v) throw std::invalid_argument("GraphSpec: self-loop at " + std::to_string(u));
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw std::invalid_argument("GraphSpec: duplicate edge (" + std::to_string(u) +
                                        "," + std::to_string(v) + ")");
    }
}

std::vector<int> GraphSpec::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_vertices), 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

double cut_eval(const GraphSpec& g, const ItemSubset& X) {
    if (X.n != g.n_vertices)
        throw std::invalid_argument("cut_eval: subset over " + std::to_string(X.n) +
                                    " vertices, graph has " + std::to_string(g.n_vertices));
    long long cut = 0, deg_sum = 0;
    for (auto [u, v] : g.edges) {
        const bool iu = X.contains(u), iv = X.contains(v);
        if (iu != iv) ++cut;
        if (iu) ++deg_sum;
        if (iv) ++deg_sum;
    }
    return static_cast<double>(cut + deg_sum);
}

GraphSpec gen_erdos_renyi(int n_vertices, double p, std::uint64_t seed) {
    if (n_vertices < 1) throw std::invalid_argument("gen_erdos_renyi: n_vertices < 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_erdos_renyi: need 0 <= p <= 1");
    Rng rng(seed);
    GraphSpec g;
    g.n_vertices = n_vertices;
    for (int u = 0; u < n_vertices; ++u)
        for (int v = u + 1; v < n_vertices; ++v)
            if (rng.bernoulli(p)) g.edges.emplace_back(u, v);
    return g;
}

} // namespace edsf
