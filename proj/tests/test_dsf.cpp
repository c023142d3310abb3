#include <doctest.h>

#include <cmath>
#include <vector>

#include <edsf/dsf.hpp>
#include <edsf/rng.hpp>
#include <edsf/set_function.hpp>

using namespace edsf;

namespace {

// The worked one-hidden-node network: phi = min_cap(1), weights (0.5, 0.5),
// then a unit-weight identity output.
DsfNetwork tiny_net() {
    DsfNetwork net;
    net.input_dim = 2;
    DsfLayer hidden;
    hidden.weights = Eigen::MatrixXd(1, 2);
    hidden.weights << 0.5, 0.5;
    hidden.biases = Eigen::VectorXd::Zero(1);
    hidden.activations = {Activation::min_cap(1.0)};
    DsfLayer out;
    out.weights = Eigen::MatrixXd::Constant(1, 1, 1.0);
    out.biases = Eigen::VectorXd::Zero(1);
    out.activations = {Activation::identity()};
    net.layers = {hidden, out};
    net.validate();
    return net;
}

double fd_weight(DsfNetwork net, const Eigen::VectorXd& x, std::size_t l, int i, int j,
                 double h) {
    net.layers[l].weights(i, j) += h;
    const double up = dsf_forward(net, x);
    net.layers[l].weights(i, j) -= 2 * h;
    const double dn = dsf_forward(net, x);
    return (up - dn) / (2 * h);
}

double fd_bias(DsfNetwork net, const Eigen::VectorXd& x, std::size_t l, int i, double h) {
    net.layers[l].biases[i] += h;
    const double up = dsf_forward(net, x);
    net.layers[l].biases[i] -= 2 * h;
    const double dn = dsf_forward(net, x);
    return (up - dn) / (2 * h);
}

double fd_input(const DsfNetwork& net, Eigen::VectorXd x, int j, double h) {
    x[j] += h;
    const double up = dsf_forward(net, x);
    x[j] -= 2 * h;
    const double dn = dsf_forward(net, std::move(x));
    return (up - dn) / (2 * h);
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// True when every pre-activation sits at least `margin` away from an
// activation kink (min_cap corner, sqrt origin), so central differences see a
// smooth function.
bool away_from_kinks(const DsfNetwork& net, const DsfCache& cache, double margin) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DsfLayer& layer = net.layers[l];
        for (int i = 0; i < layer.out_dim(); ++i) {
            const Activation& act = layer.activations[static_cast<std::size_t>(i)];
            const double z = cache.pre[l][i];
            if (act.kind == ActKind::min_cap && std::abs(z - act.alpha) < margin)
                return false;
            if (act.kind == ActKind::sqrt && z < margin) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("activations: values and one-sided derivatives") {
    Activation id = Activation::identity();
    CHECK(id(3.0) == 3.0);
    CHECK(id.deriv(3.0) == 1.0);

    Activation cap = Activation::min_cap(2.0);
    CHECK(cap(1.0) == 1.0);
    CHECK(cap(3.0) == 2.0);
    CHECK(cap.deriv(1.0) == 1.0);
    CHECK(cap.deriv(3.0) == 0.0);
    CHECK(cap.deriv(2.0) == 0.0); // kink: flat side

    Activation sq = Activation::sqrt();
    CHECK(sq(4.0) == 2.0);
    CHECK(sq.deriv(4.0) == 0.25);
    CHECK(sq.deriv(0.0) == 0.0); // finite choice at the origin
    CHECK(sq(0.0) == 0.0);

    Activation lg = Activation::log1p();
    CHECK(lg(0.0) == 0.0);
    CHECK(lg(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    CHECK(lg.deriv(0.0) == 1.0);
    CHECK(lg.deriv(1.0) == 0.5);
}

TEST_CASE("dsf_forward: worked one-node example") {
    DsfNetwork net = tiny_net();
    Eigen::VectorXd x(2);
    x << 1.0, 1.0;
    CHECK(dsf_forward(net, x) == 1.0);
    x << 0.5, 0.5;
    CHECK(dsf_forward(net, x) == 0.5);
    x << 3.0, 3.0; // capped
    CHECK(dsf_forward(net, x) == 1.0);
    CHECK(dsf_eval_set(net, ItemSubset::full_set(2)) == 1.0);
    CHECK(dsf_eval_set(net, ItemSubset::empty_set(2)) == 0.0);
    CHECK(dsf_eval_set(net, ItemSubset::singleton(2, 0)) == 0.5);
}

TEST_CASE("dsf_forward: bias sits outside the activation") {
    DsfNetwork net;
    net.input_dim = 1;
    DsfLayer hidden;
    hidden.weights = Eigen::MatrixXd::Constant(1, 1, 1.0);
    hidden.biases = Eigen::VectorXd::Constant(1, 2.0);
    hidden.activations = {Activation::sqrt()};
    DsfLayer out;
    out.weights = Eigen::MatrixXd::Constant(1, 1, 1.0);
    out.biases = Eigen::VectorXd::Zero(1);
    out.activations = {Activation::identity()};
    net.layers = {hidden, out};
    net.validate();
    Eigen::VectorXd x(1);
    x << 4.0;
    CHECK(dsf_forward(net, x) == 4.0); // sqrt(4) + 2, not sqrt(4 + 2)
    x << 0.0;
    CHECK(dsf_forward(net, x) == 2.0); // bias makes f(0) > 0, still a valid DSF
}

TEST_CASE("dsf_forward rejects bad input") {
    DsfNetwork net = tiny_net();
    Eigen::VectorXd bad(2);
    bad << -0.1, 0.5;
    CHECK_THROWS_AS(dsf_forward(net, bad), std::invalid_argument);
    Eigen::VectorXd wrong(3);
    wrong << 0, 0, 0;
    CHECK_THROWS_AS(dsf_forward(net, wrong), std::invalid_argument);
}

TEST_CASE("validate rejects broken networks") {
    DsfNetwork net = tiny_net();
    SUBCASE("negative weight") {
        net.layers[0].weights(0, 0) = -0.01;
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
    SUBCASE("negative bias") {
        net.layers[0].biases[0] = -1.0;
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
    SUBCASE("non-positive min_cap alpha") {
        net.layers[0].activations[0] = Activation::min_cap(0.0);
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
    SUBCASE("final layer must be a single identity node") {
        net.layers[1].activations[0] = Activation::sqrt();
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
    SUBCASE("dimension chain broken") {
        net.layers[1].weights = Eigen::MatrixXd::Constant(1, 2, 1.0);
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
    SUBCASE("no layers") {
        net.layers.clear();
        CHECK_THROWS_AS(net.validate(), std::invalid_argument);
    }
}

TEST_CASE("init_dsf: reproducible, bounded, valid") {
    DsfNetwork a = init_dsf(5, {4, 3}, Activation::min_cap(2.0), 17);
    DsfNetwork b = init_dsf(5, {4, 3}, Activation::min_cap(2.0), 17);
    REQUIRE(a.layers.size() == 3); // two hidden + final sum
    CHECK(a.parameter_count() == 43);
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        CHECK((a.layers[l].weights - b.layers[l].weights).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.layers[l].weights.array() >= 0.0).all());
        CHECK((a.layers[l].weights.array() <= 1.0 / a.layers[l].in_dim()).all());
        CHECK((a.layers[l].biases.array() == 0.0).all());
    }
    DsfNetwork c = init_dsf(5, {4, 3}, Activation::min_cap(2.0), 18);
    CHECK((a.layers[0].weights - c.layers[0].weights).cwiseAbs().maxCoeff() > 0.0);
    CHECK(a.layers.back().out_dim() == 1);
    CHECK(a.layers.back().activations[0] == Activation::identity());
}

TEST_CASE("project_weights_nonneg clamps the negatives only") {
    DsfNetwork net = tiny_net();
    net.layers[0].weights(0, 1) = -0.5;
    net.layers[0].biases[0] = -1.0;
    project_weights_nonneg(net);
    CHECK(net.layers[0].weights(0, 0) == 0.5);
    CHECK(net.layers[0].weights(0, 1) == 0.0);
    CHECK(net.layers[0].biases[0] == 0.0);
    net.validate();
}

TEST_CASE("dsf_backward matches central finite differences") {
    const double h = 1e-5;
    const double tol = 1e-4; // relative
    const std::vector<Activation> acts = {Activation::min_cap(2.0), Activation::sqrt(),
                                          Activation::log1p(), Activation::identity()};
    Rng rng(99);
    int checked = 0;
    for (std::size_t ai = 0; ai < acts.size(); ++ai) {
        DsfNetwork net = init_dsf(5, {4, 3}, acts[ai], 100 + ai);
        // lift weights away from zero so +-h probes stay in a smooth region
        for (auto& layer : net.layers) layer.weights.array() += 0.05;
        for (int trial = 0; trial < 40; ++trial) {
            Eigen::VectorXd x(5);
            for (int i = 0; i < 5; ++i) x[i] = rng.uniform(0.05, 2.0);
            DsfCache cache;
            const double base = dsf_forward(net, x, &cache);
            CHECK(std::isfinite(base));
            if (!away_from_kinks(net, cache, 1e-3)) continue;
            DsfGradients g = dsf_backward(net, cache);
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                const DsfLayer& layer = net.layers[l];
                for (int i = 0; i < layer.out_dim(); ++i) {
                    CHECK(close_rel(g.dbiases[l][i], fd_bias(net, x, l, i, h), tol));
                    for (int j = 0; j < layer.in_dim(); ++j)
                        CHECK(close_rel(g.dweights[l](i, j), fd_weight(net, x, l, i, j, h),
                                        tol));
                }
            }
            for (int j = 0; j < 5; ++j)
                CHECK(close_rel(g.dx[j], fd_input(net, x, j, h), tol));
            CHECK((g.dx - dsf_input_gradient(net, cache)).cwiseAbs().maxCoeff() == 0.0);
            CHECK((g.dx.array() >= 0.0).all());
            ++checked;
        }
    }
    CHECK(checked >= 100); // kink rejection must not hollow the test out
}

TEST_CASE("random networks are monotone and submodular on indicators") {
    const std::vector<Activation> acts = {Activation::min_cap(1.5), Activation::sqrt(),
                                          Activation::log1p()};
    for (std::size_t ai = 0; ai < acts.size(); ++ai) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            DsfNetwork net = init_dsf(6, {5, 4}, acts[ai], seed * 10 + ai);
            DsfOracle oracle(net);
            CHECK(check_monotone(oracle) == std::nullopt);
            CHECK(check_submodular(oracle) == std::nullopt);
        }
    }
}
