#include "edsf/dataset.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "edsf/rng.hpp"
#include "edsf/subset.hpp"

namespace edsf {

void SampleDataset::validate() const {
    if (n < 1) throw std::invalid_argument("SampleDataset: n < 1");
    if (X.rows() != y.size() || X.cols() != n)
        throw std::invalid_argument("SampleDataset: shape mismatch");
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            if (X(i, j) != 0.0 && X(i, j) != 1.0)
                throw std::invalid_argument("SampleDataset: indicator entry not 0/1");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y[i] < 0.0) throw std::invalid_argument("SampleDataset: negative target");
}

SampleDataset gen_dataset(const SetFunctionOracle& f, int d, double inclusion_p,
                          std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("gen_dataset: d < 1");
    if (!(inclusion_p > 0.0 && inclusion_p < 1.0))
        throw std::invalid_argument("gen_dataset: need 0 < inclusion_p < 1");
    const int n = f.ground_size();
    Rng rng(seed);
    SampleDataset ds;
    ds.n = n;
    ds.X.resize(d, n);
    ds.y.resize(d);
    for (int i = 0; i < d; ++i) {
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j) {
            const bool in = rng.bernoulli(inclusion_p);
            ds.X(i, j) = in ? 1.0 : 0.0;
            if (in) mask |= 1ULL << j;
        }
        ds.y[i] = f.value(ItemSubset(n, mask));
    }
    return ds;
}

std::pair<SampleDataset, SampleDataset> split_dataset(const SampleDataset& ds,
                                                      double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split_dataset: need 0 < ratio < 1");
    const int d = ds.size();
    const int train_count = static_cast<int>(d * ratio);
    if (train_count < 1 || train_count >= d)
        throw std::invalid_argument("split_dataset: dataset too small to split at ratio " +
                                    std::to_string(ratio));

    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) idx[i] = i;
    Rng rng(seed);
    for (int i = d - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(0, i)]);

    auto take = [&](int from, int count) {
        SampleDataset part;
        part.n = ds.n;
        part.X.resize(count, ds.n);
        part.y.resize(count);
        for (int i = 0; i < count; ++i) {
            part.X.row(i) = ds.X.row(idx[from + i]);
            part.y[i] = ds.y[idx[from + i]];
        }
        return part;
    };
    return {take(0, train_count), take(train_count, d - train_count)};
}

double evaluate(const EdsfModel& model, const SampleDataset& ds) {
    if (ds.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    if (model.input_dim() != ds.n)
        throw std::invalid_argument("evaluate: model dim " +
                                    std::to_string(model.input_dim()) + " vs dataset " +
                                    std::to_string(ds.n));
    double total = 0.0;
    for (int i = 0; i < ds.size(); ++i)
        total += l1_loss(edsf_forward(model, ds.X.row(i).transpose()), ds.y[i]);
    return total / ds.size();
}

double evaluate(const DsfNetwork& net, const SampleDataset& ds) {
    if (ds.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    if (net.input_dim != ds.n)
        throw std::invalid_argument("evaluate: network dim mismatch");
    double total = 0.0;
    for (int i = 0; i < ds.size(); ++i)
        total += l1_loss(dsf_forward(net, ds.X.row(i).transpose()), ds.y[i]);
    return total / ds.size();
}

} // namespace edsf
