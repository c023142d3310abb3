#include "edsf/construct.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edsf {

namespace {

// Shared gadget shape: lower node capped at `cap` with weight `cap` on the
// coordinates of `inside`, upper identity node with the given per-coordinate
// weights outside, unit-weight identity sum on top. A zero cap would make
// min_cap's alpha invalid; since the capped node is then identically zero,
// an identity node with all-zero weights is an exact stand-in.
DsfNetwork make_gadget(int n, const ItemSubset& inside, double cap,
                       const std::vector<double>& outside_weights) {
    DsfLayer lower_upper;
    lower_upper.weights = Eigen::MatrixXd::Zero(2, n);
    for (int j = 0; j < n; ++j) {
        if (inside.contains(j))
            lower_upper.weights(0, j) = cap;
        else
            lower_upper.weights(1, j) = outside_weights[j];
    }
    lower_upper.biases = Eigen::VectorXd::Zero(2);
    lower_upper.activations = {cap > 0.0 ? Activation::min_cap(cap) : Activation::identity(),
                               Activation::identity()};

    DsfLayer sum;
    sum.weights = Eigen::MatrixXd::Ones(1, 2);
    sum.biases = Eigen::VectorXd::Zero(1);
    sum.activations = {Activation::identity()};

    DsfNetwork net;
    net.input_dim = n;
    net.layers = {std::move(lower_upper), std::move(sum)};
    net.validate();
    return net;
}

void require_normalized(const TabulatedFunction& f, const char* who) {
    if (f.values.empty() || f.n < 1)
        throw std::invalid_argument(std::string(who) + ": empty tabulation");
    if (f.values[0] != 0.0)
        throw std::invalid_argument(std::string(who) + ": f(empty) = " +
                                    std::to_string(f.values[0]) + ", expected 0");
}

ConstructionReport verify_model(const EdsfModel& model, const TabulatedFunction& f) {
    ConstructionReport report;
    report.n = f.n;
    report.r = model.r();
    const std::uint64_t total = 1ULL << f.n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const double got = edsf_eval_set(model, ItemSubset(f.n, mask));
        const double err = std::abs(got - f.values[mask]);
        if (err > report.max_abs_error) report.max_abs_error = err;
    }
    return report;
}

} // namespace

DsfNetwork build_gA(const TabulatedFunction& f, const ItemSubset& A) {
    require_normalized(f, "build_gA");
    if (A.n != f.n) throw std::invalid_argument("build_gA: subset dimension mismatch");
    const double c_A = f.value(A);
    std::vector<double> singleton(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j) singleton[j] = f.values[1ULL << j];
    return make_gadget(f.n, A, c_A, singleton);
}

DsfNetwork build_gB_monotone(const TabulatedFunction& f, const ItemSubset& B) {
    require_normalized(f, "build_gB_monotone");
    if (B.n != f.n)
        throw std::invalid_argument("build_gB_monotone: subset dimension mismatch");
    const double w_star = f.values.back(); // f(S)
    for (double v : f.values)
        if (v > w_star)
            throw std::invalid_argument(
                "build_gB_monotone: f(S) is not the maximum, input not monotone");
    std::vector<double> outside(static_cast<std::size_t>(f.n), w_star);
    return make_gadget(f.n, B, f.value(B), outside);
}

std::pair<EdsfModel, ConstructionReport>
build_edsf_from_submodular(const SetFunctionOracle& f) {
    const int n = f.ground_size();
    if (n > 16)
        throw std::invalid_argument("build_edsf_from_submodular: n > 16 (the gadget count "
                                    "is 2^n - 1; the construction is exact but exponential)");
    if (auto bad = check_monotone(f)) {
        throw std::invalid_argument("build_edsf_from_submodular: not monotone, f(" +
                                    bad->a.to_string() + ") = " + std::to_string(bad->fa) +
                                    " > f(" + bad->b.to_string() + ") = " +
                                    std::to_string(bad->fb));
    }
    // The triple scan is 4^n-ish; feasible through n = 12. Beyond that the
    // mandatory exactness re-verification below still catches any
    // non-submodular input, because the construction cannot reproduce one.
    if (n <= 12) {
        if (auto bad = check_submodular(f)) {
            throw std::invalid_argument(
                "build_edsf_from_submodular: not submodular at A=" + bad->a.to_string() +
                ", B=" + bad->b.to_string() + ", v=" + std::to_string(bad->v));
        }
    }

    const TabulatedFunction table = tabulate(f); // also rejects f(empty) != 0

    EdsfModel model;
    model.dsfs.reserve((1ULL << n) - 1);
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 1; mask < total; ++mask)
        model.dsfs.push_back(build_gA(table, ItemSubset(n, mask)));

    ConstructionReport report = verify_model(model, table);
    return {std::move(model), report};
}

std::pair<EdsfModel, ConstructionReport>
build_edsf_from_monotone(const SetFunctionOracle& f) {
    const int n = f.ground_size();
    if (n > 16)
        throw std::invalid_argument("build_edsf_from_monotone: n > 16 (gadget count 2^n - 1)");
    if (auto bad = check_monotone(f)) {
        throw std::invalid_argument("build_edsf_from_monotone: not monotone, f(" +
                                    bad->a.to_string() + ") = " + std::to_string(bad->fa) +
                                    " > f(" + bad->b.to_string() + ") = " +
                                    std::to_string(bad->fb));
    }

    const TabulatedFunction table = tabulate(f);

    EdsfModel model;
    model.dsfs.reserve((1ULL << n) - 1);
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 1; mask < total; ++mask)
        model.dsfs.push_back(build_gB_monotone(table, ItemSubset(n, mask)));

    ConstructionReport report = verify_model(model, table);
    return {std::move(model), report};
}

DsfNetwork coverage_exact_dsf(const CoverageSpec& spec) {
    spec.validate();
    DsfLayer detect;
    detect.weights = Eigen::MatrixXd::Zero(spec.universe_size, spec.n_items);
    for (int i = 0; i < spec.n_items; ++i)
        for (int u : spec.membership[i]) detect.weights(u, i) = 1.0;
    detect.biases = Eigen::VectorXd::Zero(spec.universe_size);
    detect.activations.assign(static_cast<std::size_t>(spec.universe_size),
                              Activation::min_cap(1.0));

    DsfLayer weigh;
    weigh.weights.resize(1, spec.universe_size);
    for (int u = 0; u < spec.universe_size; ++u) weigh.weights(0, u) = spec.weights[u];
    weigh.biases = Eigen::VectorXd::Zero(1);
    weigh.activations = {Activation::identity()};

    DsfNetwork net;
    net.input_dim = spec.n_items;
    net.layers = {std::move(detect), std::move(weigh)};
    net.validate();
    return net;
}

} // namespace edsf
