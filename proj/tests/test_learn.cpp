#include <doctest.h>

#include <cmath>
#include <numeric>

#include <edsf/coverage.hpp>
#include <edsf/dataset.hpp>
#include <edsf/set_function.hpp>
#include <edsf/train.hpp>

using namespace edsf;

namespace {

LambdaOracle modular_oracle(int n) {
    return LambdaOracle(n, [](const ItemSubset& A) {
        double s = 0.0;
        for (int i : A.items()) s += (1.0 + i) / 3.0;
        return s;
    });
}

bool networks_identical(const DsfNetwork& a, const DsfNetwork& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        if ((a.layers[l].weights - b.layers[l].weights).cwiseAbs().maxCoeff() != 0.0)
            return false;
        if ((a.layers[l].biases - b.layers[l].biases).cwiseAbs().maxCoeff() != 0.0)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("gen_dataset: reproducible indicators with oracle targets") {
    CoverageOracle f(gen_random_coverage(8, 40, 0.25, 21));
    SampleDataset ds = gen_dataset(f, 200, 0.5, 77);
    ds.validate();
    REQUIRE(ds.n == 8);
    REQUIRE(ds.size() == 200);
    for (int i = 0; i < ds.size(); ++i) {
        std::uint64_t mask = 0;
        for (int j = 0; j < 8; ++j) {
            const double v = ds.X(i, j);
            CHECK((v == 0.0 || v == 1.0));
            if (v == 1.0) mask |= 1ULL << j;
        }
        CHECK(ds.y[i] == f.value(ItemSubset(8, mask)));
    }
    SampleDataset again = gen_dataset(f, 200, 0.5, 77);
    CHECK((ds.X - again.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ds.y - again.y).cwiseAbs().maxCoeff() == 0.0);
    SampleDataset other = gen_dataset(f, 200, 0.5, 78);
    CHECK((ds.X - other.X).cwiseAbs().maxCoeff() != 0.0);
}

TEST_CASE("split_dataset: floor rule, disjoint, exhaustive, reproducible") {
    LambdaOracle f = modular_oracle(6);
    SampleDataset ds = gen_dataset(f, 1024, 0.5, 3);
    auto [train, test] = split_dataset(ds, 0.8, 9);
    CHECK(train.size() == 819); // floor(1024 * 0.8)
    CHECK(test.size() == 205);
    CHECK(train.n == 6);

    // the split is a permutation of the original rows
    const double total = ds.y.sum();
    CHECK(train.y.sum() + test.y.sum() == doctest::Approx(total).epsilon(1e-12));
    const double xsum = ds.X.sum();
    CHECK(train.X.sum() + test.X.sum() == doctest::Approx(xsum).epsilon(1e-12));

    auto [train2, test2] = split_dataset(ds, 0.8, 9);
    CHECK((train.X - train2.X).cwiseAbs().maxCoeff() == 0.0);
    auto [train3, test3] = split_dataset(ds, 0.8, 10);
    CHECK((train.X - train3.X).cwiseAbs().maxCoeff() != 0.0);
}

TEST_CASE("l1_loss and evaluate") {
    CHECK(l1_loss(3.0, 5.0) == 2.0);
    CHECK(l1_loss(5.0, 3.0) == 2.0);
    CHECK(l1_loss(4.0, 4.0) == 0.0);

    // a model that reproduces the oracle exactly evaluates to zero loss
    LambdaOracle f = modular_oracle(4);
    SampleDataset ds = gen_dataset(f, 64, 0.5, 5);
    DsfNetwork exact;
    exact.input_dim = 4;
    DsfLayer out;
    out.weights = Eigen::MatrixXd(1, 4);
    out.weights << 1.0 / 3, 2.0 / 3, 3.0 / 3, 4.0 / 3;
    out.biases = Eigen::VectorXd::Zero(1);
    out.activations = {Activation::identity()};
    exact.layers = {out};
    CHECK(evaluate(exact, ds) <= 1e-12);

    EdsfModel m;
    m.dsfs = {exact};
    CHECK(evaluate(m, ds) <= 1e-12);
}

TEST_CASE("train: zero epochs leaves the model untouched") {
    LambdaOracle f = modular_oracle(5);
    SampleDataset ds = gen_dataset(f, 128, 0.5, 1);
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.r = 2;
    cfg.layer_widths = {6};
    cfg.seed = 4;
    EdsfModel model = init_edsf(5, cfg);
    EdsfModel before = model;
    Metrics metrics = train(model, ds, cfg);
    CHECK(metrics.train_loss.empty());
    REQUIRE(model.r() == before.r());
    for (int c = 0; c < model.r(); ++c)
        CHECK(networks_identical(model.dsfs[static_cast<std::size_t>(c)],
                                 before.dsfs[static_cast<std::size_t>(c)]));
    CHECK(metrics.final_train_l1 == evaluate(before, ds));
}

TEST_CASE("train: deterministic for a fixed seed") {
    LambdaOracle f = modular_oracle(5);
    SampleDataset ds = gen_dataset(f, 256, 0.5, 2);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.r = 3;
    cfg.layer_widths = {8};
    cfg.batch_size = 32;
    cfg.seed = 11;

    EdsfModel m1 = init_edsf(5, cfg);
    EdsfModel m2 = init_edsf(5, cfg);
    Metrics a = train(m1, ds, cfg);
    Metrics b = train(m2, ds, cfg);
    REQUIRE(a.train_loss.size() == b.train_loss.size());
    for (std::size_t i = 0; i < a.train_loss.size(); ++i)
        CHECK(a.train_loss[i] == b.train_loss[i]);
    CHECK(a.final_train_l1 == b.final_train_l1);
    for (int c = 0; c < m1.r(); ++c)
        CHECK(networks_identical(m1.dsfs[static_cast<std::size_t>(c)],
                                 m2.dsfs[static_cast<std::size_t>(c)]));
}

TEST_CASE("train: fits a modular target and keeps DSF invariants") {
    const int n = 6;
    LambdaOracle f = modular_oracle(n);
    SampleDataset ds = gen_dataset(f, 512, 0.5, 8);
    auto [train_set, test_set] = split_dataset(ds, 0.8, 8);

    TrainConfig cfg;
    cfg.epochs = 1500;
    cfg.learning_rate = 3e-3;
    cfg.batch_size = 64;
    cfg.r = 1;
    cfg.layer_widths = {8};
    cfg.activation = Activation::min_cap(95.0);
    cfg.seed = 6;

    EdsfModel model = init_edsf(n, cfg);
    Metrics metrics = train(model, train_set, cfg);
    REQUIRE(metrics.train_loss.size() == 1500);
    const double test_l1 = evaluate(model, test_set);
    CHECK(metrics.final_train_l1 < 0.05);
    CHECK(test_l1 < 0.05);
    // loss must have actually decreased from the random start
    CHECK(metrics.final_train_l1 < 0.25 * metrics.train_loss.front());

    // invariants survive training: non-negative parameters, monotone +
    // submodular on indicators (single component)
    for (const DsfNetwork& net : model.dsfs) net.validate();
    EdsfOracle oracle(model);
    CHECK(check_monotone(oracle) == std::nullopt);
    CHECK(check_submodular(oracle) == std::nullopt);

    // component routing accounted every sample on the final epoch
    long long routed = std::accumulate(metrics.component_active.begin(),
                                       metrics.component_active.end(), 0LL);
    CHECK(routed == train_set.size());
}

TEST_CASE("train config validation") {
    TrainConfig cfg;
    cfg.validate();
    SUBCASE("negative epochs") {
        cfg.epochs = -1;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("zero batch") {
        cfg.batch_size = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("bad ratio") {
        cfg.split_ratio = 1.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("zero components") {
        cfg.r = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("init_edsf seeds components independently") {
    TrainConfig cfg;
    cfg.r = 3;
    cfg.layer_widths = {4};
    cfg.seed = 5;
    EdsfModel m = init_edsf(6, cfg);
    REQUIRE(m.r() == 3);
    m.validate();
    CHECK((m.dsfs[0].layers[0].weights - m.dsfs[1].layers[0].weights)
              .cwiseAbs()
              .maxCoeff() > 0.0);
    CHECK((m.dsfs[1].layers[0].weights - m.dsfs[2].layers[0].weights)
              .cwiseAbs()
              .maxCoeff() > 0.0);
    EdsfModel again = init_edsf(6, cfg);
    CHECK(networks_identical(m.dsfs[0], again.dsfs[0]));
    CHECK(networks_identical(m.dsfs[2], again.dsfs[2]));
}
