#include "edsf/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"
#include "edsf/subset.hpp"

namespace edsf {

void WelfareInstance::validate() const {
    if (n_users < 1) throw std::invalid_argument("WelfareInstance: n_users < 1");
    if (m_items < 1) throw std::invalid_argument("WelfareInstance: m_items < 1");
    if (static_cast<int>(learned.size()) != n_users ||
        static_cast<int>(truth.size()) != n_users)
        throw std::invalid_argument("WelfareInstance: need one valuation per user");
    for (const EdsfModel& m : learned)
        if (m.input_dim() != m_items)
            throw std::invalid_argument("WelfareInstance: learned valuation dim mismatch");
    for (const auto& t : truth)
        if (!t || t->ground_size() != m_items)
            throw std::invalid_argument("WelfareInstance: true valuation dim mismatch");
}

void validate_allocation(const Eigen::MatrixXd& a, double tol) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double col_sum = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double v = a(i, j);
            if (v < -tol || v > 1.0 + tol)
                throw std::invalid_argument("AllocationMatrix: entry out of [0,1] at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            col_sum += v;
        }
        if (std::abs(col_sum - 1.0) > tol)
            throw std::invalid_argument("AllocationMatrix: column " + std::to_string(j) +
                                        " sums to " + std::to_string(col_sum));
    }
}

double social_welfare_fractional(const std::vector<EdsfModel>& models,
                                 const Eigen::MatrixXd& a, Eigen::MatrixXd* grad) {
    if (static_cast<Eigen::Index>(models.size()) != a.rows())
        throw std::invalid_argument("social_welfare_fractional: user count mismatch");
    if (grad) grad->resize(a.rows(), a.cols());
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        // projections can leave tiny negative dust; clip before the forward pass
        const Eigen::VectorXd row = a.row(i).transpose().cwiseMax(0.0);
        if (grad) {
            EdsfCache cache;
            total += edsf_forward(models[i], row, &cache);
            grad->row(i) = edsf_input_gradient(models[i], cache).transpose();
        } else {
            total += edsf_forward(models[i], row);
        }
    }
    return total;
}

Eigen::VectorXd simplex_project(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    if (n == 0) throw std::invalid_argument("simplex_project: empty vector");
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double running = 0.0, theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        running += u[k];
        const double candidate = (running - 1.0) / static_cast<double>(k + 1);
        if (u[k] - candidate > 0.0) theta = candidate; // last k with positive slack
    }
    return (v.array() - theta).cwiseMax(0.0).matrix();
}

GaResult gradient_ascent(const std::vector<EdsfModel>& models, int m_items,
                         const GaConfig& cfg) {
    if (models.empty()) throw std::invalid_argument("gradient_ascent: no users");
    if (!(cfg.eta > 0.0)) throw std::invalid_argument("gradient_ascent: eta <= 0");
    const int n = static_cast<int>(models.size());
    for (const EdsfModel& m : models)
        if (m.input_dim() != m_items)
            throw std::invalid_argument("gradient_ascent: model dim mismatch");

    GaResult res;
    // a = 0, then project -> uniform columns
    res.a = Eigen::MatrixXd::Zero(n, m_items);
    for (int j = 0; j < m_items; ++j) res.a.col(j) = simplex_project(res.a.col(j));
    validate_allocation(res.a);

    Eigen::MatrixXd grad(n, m_items);
    for (int step = 0; step < cfg.steps; ++step) {
        const double sw = social_welfare_fractional(models, res.a, &grad);
        res.sw_trajectory.push_back(sw);

        Eigen::MatrixXd next = res.a + cfg.eta * grad;
        for (int j = 0; j < m_items; ++j) next.col(j) = simplex_project(next.col(j));
        validate_allocation(next);

        const double delta = (next - res.a).cwiseAbs().maxCoeff();
        res.a = std::move(next);
        res.steps_taken = step + 1;
        if (delta < cfg.tol) break;
    }
    res.sw_trajectory.push_back(social_welfare_fractional(models, res.a));
    return res;
}

std::vector<int> round_allocation(const Eigen::MatrixXd& a, RoundMode mode,
                                  std::uint64_t seed) {
    validate_allocation(a);
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    std::vector<int> owner(static_cast<std::size_t>(m), 0);
    Rng rng(seed);
    for (int j = 0; j < m; ++j) {
        if (mode == RoundMode::argmax) {
            int best = 0;
            for (int i = 1; i < n; ++i)
                if (a(i, j) > a(best, j)) best = i;
            owner[j] = best;
        } else {
            const double roll = rng.uniform();
            double acc = 0.0;
            int picked = n - 1; // fall through to the last user on rounding dust
            for (int i = 0; i < n; ++i) {
                acc += a(i, j);
                if (roll < acc) {
                    picked = i;
                    break;
                }
            }
            owner[j] = picked;
        }
    }
    return owner;
}

double social_welfare_discrete(const std::vector<std::shared_ptr<SetFunctionOracle>>& truth,
                               const std::vector<int>& owner) {
    if (truth.empty()) throw std::invalid_argument("social_welfare_discrete: no users");
    const int n = static_cast<int>(truth.size());
    const int m = truth.front()->ground_size();
    if (static_cast<int>(owner.size()) != m)
        throw std::invalid_argument("social_welfare_discrete: owner vector size mismatch");
    std::vector<std::uint64_t> bundle(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < m; ++j) {
        if (owner[j] < 0 || owner[j] >= n)
            throw std::invalid_argument("social_welfare_discrete: owner index out of range");
        bundle[owner[j]] |= 1ULL << j;
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += truth[i]->value(ItemSubset(m, bundle[i]));
    return total;
}

BruteResult brute_force_optimal(const std::vector<std::shared_ptr<SetFunctionOracle>>& truth,
                                int m_items) {
    if (truth.empty()) throw std::invalid_argument("brute_force_optimal: no users");
    const int n = static_cast<int>(truth.size());
    double combos = 1.0;
    for (int j = 0; j < m_items; ++j) combos *= n;
    if (combos > 1e7)
        throw std::invalid_argument("brute_force_optimal: " + std::to_string(n) + "^" +
                                    std::to_string(m_items) + " assignments exceed 1e7");

    BruteResult best;
    std::vector<int> owner(static_cast<std::size_t>(m_items), 0);
    best.owner = owner;
    best.sw = social_welfare_discrete(truth, owner);
    // odometer enumeration: lexicographic order, strict improvement keeps the
    // lexicographically smallest maximizer
    while (true) {
        int j = m_items - 1;
        while (j >= 0 && owner[j] == n - 1) owner[j--] = 0;
        if (j < 0) break;
        ++owner[j];
        const double sw = social_welfare_discrete(truth, owner);
        if (sw > best.sw) {
            best.sw = sw;
            best.owner = owner;
        }
    }
    return best;
}

double efficiency(double achieved, double optimal) {
    if (!(optimal > 0.0)) throw std::invalid_argument("efficiency: optimal must be > 0");
    return achieved / optimal;
}

CgResult continuous_greedy(const std::vector<std::shared_ptr<SetFunctionOracle>>& valuations,
                           int m_items, const CgConfig& cfg) {
    if (valuations.empty()) throw std::invalid_argument("continuous_greedy: no users");
    if (cfg.steps < 1 || cfg.samples_per_estimate < 1)
        throw std::invalid_argument("continuous_greedy: T and k must be >= 1");
    const int n = static_cast<int>(valuations.size());
    for (const auto& v : valuations)
        if (!v || v->ground_size() != m_items)
            throw std::invalid_argument("continuous_greedy: valuation dim mismatch");

    Rng rng(cfg.seed);
    CgResult res;
    res.y = Eigen::MatrixXd::Zero(n, m_items);

    for (int step = 0; step < cfg.steps; ++step) {
        // marginal of the multilinear extension for (user i, item j), by
        // averaging value(S + j) - value(S) over k sets S ~ y.row(i)
        Eigen::MatrixXd marginal = Eigen::MatrixXd::Zero(n, m_items);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m_items; ++j) {
                double acc = 0.0;
                for (int s = 0; s < cfg.samples_per_estimate; ++s) {
                    std::uint64_t mask = 0;
                    for (int l = 0; l < m_items; ++l)
                        if (l != j && rng.uniform() < res.y(i, l)) mask |= 1ULL << l;
                    const double without = valuations[i]->value(ItemSubset(m_items, mask));
                    const double with_j =
                        valuations[i]->value(ItemSubset(m_items, mask | (1ULL << j)));
                    acc += with_j - without;
                }
                marginal(i, j) = acc / cfg.samples_per_estimate;
            }
        }
        // each item's unit of rate goes to its best user (lowest index wins ties)
        for (int j = 0; j < m_items; ++j) {
            int best = 0;
            for (int i = 1; i < n; ++i)
                if (marginal(i, j) > marginal(best, j)) best = i;
            res.y(best, j) += 1.0 / cfg.steps;
        }
    }

    // columns sum to 1 up to accumulated rounding; normalize exactly, then round
    for (int j = 0; j < m_items; ++j) {
        const double s = res.y.col(j).sum();
        if (s > 0.0) res.y.col(j) /= s;
    }
    res.owner = round_allocation(res.y, RoundMode::sample, derive_seed(cfg.seed, 0xC6));
    res.sw = social_welfare_discrete(valuations, res.owner);
    return res;
}

} // namespace edsf
