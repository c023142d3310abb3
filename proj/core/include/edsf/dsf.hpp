#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

// Normalized, non-decreasing, concave scalar activations on x >= 0.
enum class ActKind { identity, min_cap, sqrt, log1p };

struct Activation {
    ActKind kind = ActKind::identity;
    double alpha = 0.0; // min_cap only: phi(x) = min(x, alpha), alpha > 0

    double operator()(double x) const;
    // One-sided derivative. At the min_cap kink (x == alpha) the flat-side
    // subgradient 0 is returned, so capped nodes stop pushing weights upward
    // and gradients stay deterministic. sqrt has an unbounded derivative at
    // x == 0; the flat choice 0 is returned there to keep training finite.
    double deriv(double x) const;

    static Activation identity() { return {ActKind::identity, 0.0}; }
    static Activation min_cap(double alpha) { return {ActKind::min_cap, alpha}; }
    static Activation sqrt() { return {ActKind::sqrt, 0.0}; }
    static Activation log1p() { return {ActKind::log1p, 0.0}; }

    friend bool operator==(const Activation&, const Activation&) = default;
};

// One layer: out = phi(W * in) + b, applied per output node. The bias sits
// outside the activation. All weights and biases are non-negative.
struct DsfLayer {
    Eigen::MatrixXd weights; // out_dim x in_dim
    Eigen::VectorXd biases;  // out_dim
    std::vector<Activation> activations; // per output node

    int out_dim() const { return static_cast<int>(weights.rows()); }
    int in_dim() const { return static_cast<int>(weights.cols()); }
};

// Layered network over non-negative inputs. The final layer is a single
// identity-activation node (a plain weighted sum), which validate() enforces.
struct DsfNetwork {
    int input_dim = 0;
    std::vector<DsfLayer> layers;

    // Throws std::invalid_argument on any broken invariant: dimension chain,
    // negative weight or bias, non-positive min_cap alpha, missing layers,
    // or a final layer that is not a single identity node.
    void validate() const;

    std::size_t parameter_count() const;
};

// Forward-pass cache holding per-layer pre-activations and outputs; required
// by dsf_backward.
struct DsfCache {
    Eigen::VectorXd x;
    std::vector<Eigen::VectorXd> pre;  // z_l = W_l * a_{l-1}
    std::vector<Eigen::VectorXd> post; // a_l = phi(z_l) + b_l
};

// Evaluates the network on x >= 0. Throws on negative input components or a
// dimension mismatch. Pass a cache to enable dsf_backward.
double dsf_forward(const DsfNetwork& net, const Eigen::VectorXd& x,
                   DsfCache* cache = nullptr);

double dsf_eval_set(const DsfNetwork& net, const ItemSubset& A);

Eigen::VectorXd indicator_vector(const ItemSubset& A);

struct DsfGradients {
    std::vector<Eigen::MatrixXd> dweights;
    std::vector<Eigen::VectorXd> dbiases;
    Eigen::VectorXd dx; // entrywise >= 0 for a valid network
};

// Exact chain-rule gradients of the scalar output with respect to every
// weight, bias, and the input, using the cache from dsf_forward.
DsfGradients dsf_backward(const DsfNetwork& net, const DsfCache& cache);

// Gradient with respect to the input only (no parameter gradients); cheaper,
// used by the welfare ascent loop.
Eigen::VectorXd dsf_input_gradient(const DsfNetwork& net, const DsfCache& cache);

// Random network: hidden layers of the given widths with the given
// activation, then a single identity output node. Weights ~ U(0, 1/in_dim),
// biases 0. Reproducible for a fixed seed.
DsfNetwork init_dsf(int input_dim, const std::vector<int>& hidden_widths,
                    const Activation& hidden_act, std::uint64_t seed);

// Clamps every weight and bias to max(., 0), restoring DSF invariants after
// an unconstrained optimizer step.
void project_weights_nonneg(DsfNetwork& net);

// Set-function view of a network (indicator-vector bridge).
class DsfOracle final : public SetFunctionOracle {
public:
    explicit DsfOracle(const DsfNetwork& net) : net_(&net) {}
    int ground_size() const override { return net_->input_dim; }
    double value(const ItemSubset& A) const override { return dsf_eval_set(*net_, A); }

private:
    const DsfNetwork* net_;
};

} // namespace edsf
