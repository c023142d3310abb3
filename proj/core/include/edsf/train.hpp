#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "edsf/dataset.hpp"
#include "edsf/dsf.hpp"
#include "edsf/edsf.hpp"

namespace edsf {

struct TrainConfig {
    int epochs = 10000;
    double learning_rate = 1e-3;
    int batch_size = 64;
    int r = 1;                               // number of component networks
    std::vector<int> layer_widths = {64, 64, 64}; // hidden widths per component
    Activation activation = Activation::min_cap(95.0);
    double split_ratio = 0.8; // used by orchestration when cutting datasets
    std::uint64_t seed = 0;

    void validate() const;
};

struct Metrics {
    std::vector<double> train_loss; // one entry per epoch (mean L1 over the epoch)
    double final_train_l1 = 0.0;
    double final_test_l1 = std::numeric_limits<double>::quiet_NaN(); // caller fills
    std::vector<long long> component_active; // samples routed per component, last epoch
};

// Fresh model per the config: r components, each with the configured hidden
// widths and activation, seeded independently (derived from cfg.seed) so the
// min starts with diverse branches.
EdsfModel init_edsf(int input_dim, const TrainConfig& cfg);

// Mini-batch subgradient descent on mean L1 with adaptive per-parameter step
// sizes (Adam-style moment estimates), projecting every weight and bias back
// to >= 0 after each step. Only the argmin component of each sample receives
// gradient. Deterministic for a fixed config and seed (single-threaded).
// Throws std::runtime_error if the loss diverges to NaN/inf.
Metrics train(EdsfModel& model, const SampleDataset& train_set, const TrainConfig& cfg);

} // namespace edsf
