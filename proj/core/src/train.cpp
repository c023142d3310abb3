#include "edsf/train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

void TrainConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs < 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate <= 0");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size < 1");
    if (r < 1) throw std::invalid_argument("TrainConfig: r < 1");
    if (layer_widths.empty()) throw std::invalid_argument("TrainConfig: no hidden layers");
    for (int w : layer_widths)
        if (w < 1) throw std::invalid_argument("TrainConfig: hidden width < 1");
    if (!(split_ratio > 0.0 && split_ratio < 1.0))
        throw std::invalid_argument("TrainConfig: need 0 < split_ratio < 1");
}

EdsfModel init_edsf(int input_dim, const TrainConfig& cfg) {
    cfg.validate();
    EdsfModel model;
    model.dsfs.reserve(static_cast<std::size_t>(cfg.r));
    for (int c = 0; c < cfg.r; ++c)
        model.dsfs.push_back(init_dsf(input_dim, cfg.layer_widths, cfg.activation,
                                      derive_seed(cfg.seed, 0x100 + c)));
    return model;
}

namespace {

bool uniform_activation(const DsfLayer& layer) {
    for (const Activation& a : layer.activations)
        if (!(a == layer.activations.front())) return false;
    return true;
}

// phi(Z) element-wise over a batch (rows = samples, cols = layer nodes),
// bias broadcast on top.
Eigen::MatrixXd apply_batched(const DsfLayer& layer, const Eigen::MatrixXd& Z) {
    Eigen::MatrixXd A;
    if (uniform_activation(layer)) {
        const Activation& act = layer.activations.front();
        switch (act.kind) {
            case ActKind::identity: A = Z; break;
            case ActKind::min_cap: A = Z.cwiseMin(act.alpha); break;
            case ActKind::sqrt: A = Z.array().sqrt().matrix(); break;
            case ActKind::log1p: A = Z.array().log1p().matrix(); break;
        }
    } else {
        A.resize(Z.rows(), Z.cols());
        for (Eigen::Index c = 0; c < Z.cols(); ++c) {
            const Activation& act = layer.activations[static_cast<std::size_t>(c)];
            for (Eigen::Index i = 0; i < Z.rows(); ++i) A(i, c) = act(Z(i, c));
        }
    }
    A.rowwise() += layer.biases.transpose();
    return A;
}

Eigen::MatrixXd deriv_batched(const DsfLayer& layer, const Eigen::MatrixXd& Z) {
    if (uniform_activation(layer)) {
        const Activation& act = layer.activations.front();
        switch (act.kind) {
            case ActKind::identity: return Eigen::MatrixXd::Ones(Z.rows(), Z.cols());
            case ActKind::min_cap:
                return (Z.array() < act.alpha).cast<double>().matrix();
            case ActKind::sqrt:
                return (Z.array() > 0.0)
                    .select(0.5 * Z.array().rsqrt(), Eigen::ArrayXXd::Zero(Z.rows(), Z.cols()))
                    .matrix();
            case ActKind::log1p: return (1.0 / (1.0 + Z.array())).matrix();
        }
    }
    Eigen::MatrixXd D(Z.rows(), Z.cols());
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
        const Activation& act = layer.activations[static_cast<std::size_t>(c)];
        for (Eigen::Index i = 0; i < Z.rows(); ++i) D(i, c) = act.deriv(Z(i, c));
    }
    return D;
}

// Adam moments for one component network.
struct AdamState {
    std::vector<Eigen::MatrixXd> mW, vW;
    std::vector<Eigen::VectorXd> mb, vb;
    long long t = 0; // advances only on steps where the component is active

    explicit AdamState(const DsfNetwork& net) {
        for (const DsfLayer& l : net.layers) {
            mW.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
            vW.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
            mb.push_back(Eigen::VectorXd::Zero(l.biases.size()));
            vb.push_back(Eigen::VectorXd::Zero(l.biases.size()));
        }
    }
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void adam_update(Eigen::MatrixXd& theta, Eigen::MatrixXd& m, Eigen::MatrixXd& v,
                 const Eigen::MatrixXd& g, double alpha_t) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    theta.array() -= alpha_t * m.array() / (v.array().sqrt() + kAdamEps);
    theta = theta.cwiseMax(0.0); // projection back onto the DSF class
}

void adam_update(Eigen::VectorXd& theta, Eigen::VectorXd& m, Eigen::VectorXd& v,
                 const Eigen::VectorXd& g, double alpha_t) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    theta.array() -= alpha_t * m.array() / (v.array().sqrt() + kAdamEps);
    theta = theta.cwiseMax(0.0);
}

// Per-component scratch for the batched passes.
struct ComponentScratch {
    std::vector<Eigen::MatrixXd> Z; // pre-activations per layer, batch rows
    std::vector<Eigen::MatrixXd> A; // outputs per layer
};

} // namespace

Metrics train(EdsfModel& model, const SampleDataset& train_set, const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    train_set.validate();
    if (model.input_dim() != train_set.n)
        throw std::invalid_argument("train: model dim " + std::to_string(model.input_dim()) +
                                    " vs dataset " + std::to_string(train_set.n));

    const int d = train_set.size();
    const int r = model.r();

    Metrics metrics;
    metrics.component_active.assign(static_cast<std::size_t>(r), 0);
    if (cfg.epochs == 0) { // explicit no-op budget: model untouched
        metrics.final_train_l1 = evaluate(model, train_set);
        return metrics;
    }
    metrics.train_loss.reserve(static_cast<std::size_t>(cfg.epochs));

    std::vector<AdamState> adam;
    adam.reserve(static_cast<std::size_t>(r));
    for (const DsfNetwork& net : model.dsfs) adam.emplace_back(net);

    std::vector<ComponentScratch> scratch(static_cast<std::size_t>(r));
    for (int c = 0; c < r; ++c) {
        scratch[c].Z.resize(model.dsfs[c].layers.size());
        scratch[c].A.resize(model.dsfs[c].layers.size());
    }

    Rng shuffle_rng(derive_seed(cfg.seed, 0x5FF1E));
    std::vector<int> order(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) order[i] = i;

    std::vector<std::vector<int>> routed(static_cast<std::size_t>(r)); // batch-local rows

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = d - 1; i > 0; --i)
            std::swap(order[i], order[shuffle_rng.uniform_int(0, i)]);

        const bool last_epoch = (epoch == cfg.epochs - 1);
        if (last_epoch) metrics.component_active.assign(static_cast<std::size_t>(r), 0);

        double abs_err_sum = 0.0;
        for (int start = 0; start < d; start += cfg.batch_size) {
            const int B = std::min(cfg.batch_size, d - start);

            Eigen::MatrixXd Xb(B, train_set.n);
            Eigen::VectorXd yb(B);
            for (int i = 0; i < B; ++i) {
                Xb.row(i) = train_set.X.row(order[start + i]);
                yb[i] = train_set.y[order[start + i]];
            }

            // forward every component on the whole batch
            for (int c = 0; c < r; ++c) {
                const DsfNetwork& net = model.dsfs[c];
                ComponentScratch& s = scratch[c];
                const Eigen::MatrixXd* below = &Xb;
                for (std::size_t l = 0; l < net.layers.size(); ++l) {
                    s.Z[l].noalias() = (*below) * net.layers[l].weights.transpose();
                    s.A[l] = apply_batched(net.layers[l], s.Z[l]);
                    below = &s.A[l];
                }
            }

            // min over components per sample, lowest index on ties
            for (int c = 0; c < r; ++c) routed[c].clear();
            for (int i = 0; i < B; ++i) {
                int best = 0;
                double best_val = scratch[0].A.back()(i, 0);
                for (int c = 1; c < r; ++c) {
                    const double v = scratch[c].A.back()(i, 0);
                    if (v < best_val) {
                        best_val = v;
                        best = c;
                    }
                }
                routed[best].push_back(i);
                abs_err_sum += l1_loss(best_val, yb[i]);
                if (last_epoch) ++metrics.component_active[best];
            }

            // backward + update per component, over its rows only
            for (int c = 0; c < r; ++c) {
                if (routed[c].empty()) continue;
                const DsfNetwork& net = model.dsfs[c];
                ComponentScratch& s = scratch[c];
                const int Bc = static_cast<int>(routed[c].size());
                const std::size_t L = net.layers.size();

                // dLoss/dpred, mean over the full batch: sign / B
                Eigen::MatrixXd dA(Bc, 1);
                for (int k = 0; k < Bc; ++k) {
                    const int i = routed[c][k];
                    const double diff = s.A.back()(i, 0) - yb[i];
                    dA(k, 0) = diff > 0.0 ? 1.0 / B : (diff < 0.0 ? -1.0 / B : 0.0);
                }

                AdamState& st = adam[c];
                st.t += 1;
                const double alpha_t = cfg.learning_rate *
                                       std::sqrt(1.0 - std::pow(kBeta2, st.t)) /
                                       (1.0 - std::pow(kBeta1, st.t));

                // gather helper: rows of M routed to this component
                auto gather = [&](const Eigen::MatrixXd& M) {
                    Eigen::MatrixXd G(Bc, M.cols());
                    for (int k = 0; k < Bc; ++k) G.row(k) = M.row(routed[c][k]);
                    return G;
                };

                for (std::size_t l = L; l-- > 0;) {
                    DsfLayer& layer = model.dsfs[c].layers[l];
                    const Eigen::MatrixXd Zl = gather(s.Z[l]);
                    const Eigen::VectorXd db = dA.colwise().sum().transpose();
                    const Eigen::MatrixXd dZ = dA.cwiseProduct(deriv_batched(layer, Zl));
                    const Eigen::MatrixXd below =
                        l == 0 ? gather(Xb) : gather(s.A[l - 1]);
                    const Eigen::MatrixXd dW = dZ.transpose() * below;
                    if (l > 0) dA = dZ * layer.weights; // propagate before updating W
                    adam_update(layer.weights, st.mW[l], st.vW[l], dW, alpha_t);
                    adam_update(layer.biases, st.mb[l], st.vb[l], db, alpha_t);
                }
            }
        }

        const double epoch_loss = abs_err_sum / d;
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("train: loss diverged to " + std::to_string(epoch_loss) +
                                     " at epoch " + std::to_string(epoch));
        metrics.train_loss.push_back(epoch_loss);

        // class invariant after the projected steps: nothing went negative
        for (const DsfNetwork& net : model.dsfs)
            for (const DsfLayer& layer : net.layers)
                if (layer.weights.minCoeff() < 0.0 || layer.biases.minCoeff() < 0.0)
                    throw std::logic_error("train: projection failed to keep parameters >= 0");
    }

    metrics.final_train_l1 = evaluate(model, train_set);
    return metrics;
}

} // namespace edsf
