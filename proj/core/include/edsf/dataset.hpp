#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "edsf/edsf.hpp"
#include "edsf/set_function.hpp"

namespace edsf {

// Regression dataset over indicator vectors: row i of X is the 0/1 indicator
// of a subset, y[i] its target value.
struct SampleDataset {
    int n = 0;
    Eigen::MatrixXd X; // d x n, entries in {0,1}
    Eigen::VectorXd y; // d, non-negative

    int size() const { return static_cast<int>(y.size()); }
    void validate() const;
};

// d random subsets, each element included i.i.d. with inclusion_p (0.5 makes
// the subsets uniform over 2^S); targets from the oracle. Reproducible.
SampleDataset gen_dataset(const SetFunctionOracle& f, int d, double inclusion_p,
                          std::uint64_t seed);

// Shuffle then cut: train gets floor(d * ratio) samples, test the rest.
std::pair<SampleDataset, SampleDataset> split_dataset(const SampleDataset& ds,
                                                      double ratio, std::uint64_t seed);

inline double l1_loss(double pred, double target) {
    return pred >= target ? pred - target : target - pred;
}

// Mean absolute error over the dataset.
double evaluate(const EdsfModel& model, const SampleDataset& ds);
double evaluate(const DsfNetwork& net, const SampleDataset& ds);

} // namespace edsf
