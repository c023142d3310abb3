#include "edsf/edsf.hpp"

#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

void EdsfModel::validate() const {
    if (dsfs.empty()) throw std::invalid_argument("EdsfModel: needs r >= 1 components");
    const int dim = dsfs.front().input_dim;
    for (std::size_t i = 0; i < dsfs.size(); ++i) {
        if (dsfs[i].input_dim != dim)
            throw std::invalid_argument("EdsfModel: component " + std::to_string(i) +
                                        " input dim differs");
        dsfs[i].validate();
    }
}

double edsf_forward(const EdsfModel& m, const Eigen::VectorXd& x, EdsfCache* cache) {
    if (m.dsfs.empty()) throw std::invalid_argument("edsf_forward: empty model");
    double best = 0.0;
    int argmin = -1;
    Eigen::VectorXd values(m.r());
    for (int i = 0; i < m.r(); ++i) {
        values[i] = dsf_forward(m.dsfs[i], x);
        if (argmin < 0 || values[i] < best) {
            best = values[i];
            argmin = i;
        }
    }
    if (cache) {
        cache->values = std::move(values);
        cache->argmin = argmin;
        // re-run the winning branch with a cache for the backward pass
        dsf_forward(m.dsfs[argmin], x, &cache->argmin_cache);
    }
    return best;
}

double edsf_eval_set(const EdsfModel& m, const ItemSubset& A) {
    if (A.n != m.input_dim())
        throw std::invalid_argument("edsf_eval_set: subset over " + std::to_string(A.n) +
                                    " items, model expects " +
                                    std::to_string(m.input_dim()));
    return edsf_forward(m, indicator_vector(A));
}

EdsfGradients edsf_backward(const EdsfModel& m, const EdsfCache& cache) {
    if (cache.argmin < 0 || cache.argmin >= m.r())
        throw std::invalid_argument("edsf_backward: cache has no argmin branch");
    EdsfGradients g;
    g.argmin = cache.argmin;
    g.grads = dsf_backward(m.dsfs[cache.argmin], cache.argmin_cache);
    g.dx = g.grads.dx;
    return g;
}

Eigen::VectorXd edsf_input_gradient(const EdsfModel& m, const EdsfCache& cache) {
    if (cache.argmin < 0 || cache.argmin >= m.r())
        throw std::invalid_argument("edsf_input_gradient: cache has no argmin branch");
    return dsf_input_gradient(m.dsfs[cache.argmin], cache.argmin_cache);
}

std::optional<ConcavityViolation> check_concavity(const EdsfModel& m, int trials,
                                                  double box_max, std::uint64_t seed,
                                                  double tol) {
    if (trials < 1) throw std::invalid_argument("check_concavity: trials < 1");
    const int n = m.input_dim();
    Rng rng(seed);
    Eigen::VectorXd x(n), y(n);
    for (int t = 0; t < trials; ++t) {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, box_max);
        for (int i = 0; i < n; ++i) y[i] = rng.uniform(0.0, box_max);
        const double lambda = rng.uniform();
        const Eigen::VectorXd mid = lambda * x + (1.0 - lambda) * y;
        const double fmid = edsf_forward(m, mid);
        const double chord = lambda * edsf_forward(m, x) + (1.0 - lambda) * edsf_forward(m, y);
        if (fmid < chord - tol) return ConcavityViolation{x, y, lambda, fmid, chord};
    }
    return std::nullopt;
}

std::optional<MonotonicityViolation> check_monotone_continuous(const EdsfModel& m,
                                                               int trials, double box_max,
                                                               std::uint64_t seed,
                                                               double tol) {
    if (trials < 1) throw std::invalid_argument("check_monotone_continuous: trials < 1");
    const int n = m.input_dim();
    Rng rng(seed);
    Eigen::VectorXd x(n), y(n);
    for (int t = 0; t < trials; ++t) {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, box_max);
        for (int i = 0; i < n; ++i) y[i] = x[i] + rng.uniform(0.0, box_max);
        const double fx = edsf_forward(m, x);
        const double fy = edsf_forward(m, y);
        if (fx > fy + tol) return MonotonicityViolation{x, y, fx, fy};
    }
    return std::nullopt;
}

} // namespace edsf
