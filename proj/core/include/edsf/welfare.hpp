#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "edsf/edsf.hpp"
#include "edsf/set_function.hpp"

namespace edsf {

// One allocation problem: m_items to be partitioned among n_users. The
// learned models drive the continuous optimization; the true oracles score
// the resulting discrete assignments (and feed the brute-force optimum).
struct WelfareInstance {
    int n_users = 0;
    int m_items = 0;
    std::vector<EdsfModel> learned;                        // per user
    std::vector<std::shared_ptr<SetFunctionOracle>> truth; // per user

    void validate() const;
};

// Allocation matrices are n_users x m_items, every entry in [0,1], every item
// column on the probability simplex.
void validate_allocation(const Eigen::MatrixXd& a, double tol = 1e-9);

// Sum of per-user model values on their fractional rows. Optionally returns
// the supergradient matrix (per-user input gradients stacked as rows).
double social_welfare_fractional(const std::vector<EdsfModel>& models,
                                 const Eigen::MatrixXd& a,
                                 Eigen::MatrixXd* grad = nullptr);

// Euclidean projection onto the probability simplex (sort-and-threshold):
// the unique w >= 0 with sum(w) = 1 minimizing ||w - v||_2. Satisfies the KKT
// form w_i = max(v_i - theta, 0).
Eigen::VectorXd simplex_project(const Eigen::VectorXd& v);

struct GaConfig {
    double eta = 0.05;
    int steps = 500;
    double tol = 1e-7; // stop when the infinity-norm change falls below
};

struct GaResult {
    Eigen::MatrixXd a;                 // final allocation, columns on the simplex
    std::vector<double> sw_trajectory; // fractional SW after each iterate
    int steps_taken = 0;
};

// Projected supergradient ascent on the concave relaxation: a starts at the
// projection of zero (uniform columns), then repeats a += eta * grad followed
// by per-column simplex projection.
GaResult gradient_ascent(const std::vector<EdsfModel>& models, int m_items,
                         const GaConfig& cfg = {});

enum class RoundMode { sample, argmax };

// Integral assignment from a fractional allocation: per item, either sample
// an owner from its column or take the column argmax (lowest index on ties).
std::vector<int> round_allocation(const Eigen::MatrixXd& a, RoundMode mode,
                                  std::uint64_t seed);

double social_welfare_discrete(const std::vector<std::shared_ptr<SetFunctionOracle>>& truth,
                               const std::vector<int>& owner);

struct BruteResult {
    std::vector<int> owner;
    double sw = 0.0;
};

// Exhaustive optimum over all n_users^m_items assignments (guarded at 1e7);
// ties resolve to the lexicographically smallest owner vector.
BruteResult brute_force_optimal(const std::vector<std::shared_ptr<SetFunctionOracle>>& truth,
                                int m_items);

// achieved / optimal, guarded against a zero optimum.
double efficiency(double achieved, double optimal);

struct CgConfig {
    int steps = 100;               // T
    int samples_per_estimate = 32; // k random sets per marginal estimate
    std::uint64_t seed = 0;
};

struct CgResult {
    std::vector<int> owner;
    double sw = 0.0;    // realized on the true oracles
    Eigen::MatrixXd y;  // final fractional point (column-normalized)
};

// Continuous greedy on the multilinear extension: per step, estimate each
// user-item marginal by averaging sampled set values, give each item's
// increment to the best user, advance by 1/T; finally normalize columns and
// round by sampling.
CgResult continuous_greedy(const std::vector<std::shared_ptr<SetFunctionOracle>>& valuations,
                           int m_items, const CgConfig& cfg = {});

} // namespace edsf
