#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "edsf/dsf.hpp"
#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

// Pointwise minimum of r component networks. Monotone and concave on the
// non-negative orthant; on indicator inputs it can realize any monotone set
// function (see construct.hpp), though the min generally breaks
// submodularity of the components.
struct EdsfModel {
    std::vector<DsfNetwork> dsfs; // r >= 1, shared input_dim

    int r() const { return static_cast<int>(dsfs.size()); }
    int input_dim() const { return dsfs.empty() ? 0 : dsfs.front().input_dim; }
    void validate() const;
};

struct EdsfCache {
    Eigen::VectorXd values; // per-component forward values
    int argmin = -1;        // lowest index attaining the min
    DsfCache argmin_cache;  // forward cache of the argmin component
};

// Minimum over component forward values; ties broken by lowest index.
double edsf_forward(const EdsfModel& m, const Eigen::VectorXd& x,
                    EdsfCache* cache = nullptr);

double edsf_eval_set(const EdsfModel& m, const ItemSubset& A);

struct EdsfGradients {
    int argmin = -1;
    DsfGradients grads; // gradients of the argmin component; others are zero
    Eigen::VectorXd dx;
};

// Supergradient of the min: the gradient of the argmin component alone.
EdsfGradients edsf_backward(const EdsfModel& m, const EdsfCache& cache);

Eigen::VectorXd edsf_input_gradient(const EdsfModel& m, const EdsfCache& cache);

struct ConcavityViolation {
    Eigen::VectorXd x, y;
    double lambda = 0.0;
    double mid = 0.0, chord = 0.0;
};

// Samples x, y in [0, box_max]^n and lambda in [0,1]; checks the midpoint
// inequality f(lx+(1-l)y) >= l f(x) + (1-l) f(y) - tol. Returns the first
// violating triple, or nullopt when all trials pass.
std::optional<ConcavityViolation> check_concavity(const EdsfModel& m, int trials,
                                                  double box_max, std::uint64_t seed,
                                                  double tol = 1e-9);

struct MonotonicityViolation {
    Eigen::VectorXd x, y; // x <= y componentwise but f(x) > f(y) + tol
    double fx = 0.0, fy = 0.0;
};

// Samples x in [0, box_max]^n and a non-negative bump d, checks
// f(x) <= f(x + d) + tol.
std::optional<MonotonicityViolation> check_monotone_continuous(const EdsfModel& m,
                                                               int trials, double box_max,
                                                               std::uint64_t seed,
                                                               double tol = 1e-12);

class EdsfOracle final : public SetFunctionOracle {
public:
    explicit EdsfOracle(const EdsfModel& m) : m_(&m) {}
    int ground_size() const override { return m_->input_dim(); }
    double value(const ItemSubset& A) const override { return edsf_eval_set(*m_, A); }

private:
    const EdsfModel* m_;
};

} // namespace edsf
