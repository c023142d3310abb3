#include "edsf/dsf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

double Activation::operator()(double x) const {
    switch (kind) {
        case ActKind::identity: return x;
        case ActKind::min_cap: return x < alpha ? x : alpha;
        case ActKind::sqrt: return std::sqrt(x);
        case ActKind::log1p: return std::log1p(x);
    }
    throw std::logic_error("Activation: unknown kind");
}

double Activation::deriv(double x) const {
    switch (kind) {
        case ActKind::identity: return 1.0;
        case ActKind::min_cap: return x < alpha ? 1.0 : 0.0;
        case ActKind::sqrt: return x > 0.0 ? 0.5 / std::sqrt(x) : 0.0;
        case ActKind::log1p: return 1.0 / (1.0 + x);
    }
    throw std::logic_error("Activation: unknown kind");
}

void DsfNetwork::validate() const {
    if (input_dim < 1) throw std::invalid_argument("DsfNetwork: input_dim < 1");
    if (layers.empty()) throw std::invalid_argument("DsfNetwork: no layers");
    int in = input_dim;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const DsfLayer& layer = layers[l];
        const std::string where = "DsfNetwork layer " + std::to_string(l);
        if (layer.in_dim() != in)
            throw std::invalid_argument(where + ": expects input dim " +
                                        std::to_string(layer.in_dim()) + ", got " +
                                        std::to_string(in));
        if (layer.out_dim() < 1) throw std::invalid_argument(where + ": empty output");
        if (layer.biases.size() != layer.out_dim())
            throw std::invalid_argument(where + ": bias size mismatch");
        if (static_cast<int>(layer.activations.size()) != layer.out_dim())
            throw std::invalid_argument(where + ": activation count mismatch");
        if (layer.weights.size() > 0 && layer.weights.minCoeff() < 0.0)
            throw std::invalid_argument(where + ": negative weight");
        if (layer.biases.size() > 0 && layer.biases.minCoeff() < 0.0)
            throw std::invalid_argument(where + ": negative bias");
        for (const Activation& a : layer.activations)
            if (a.kind == ActKind::min_cap && !(a.alpha > 0.0))
                throw std::invalid_argument(where + ": min_cap needs alpha > 0");
        in = layer.out_dim();
    }
    const DsfLayer& last = layers.back();
    if (last.out_dim() != 1)
        throw std::invalid_argument("DsfNetwork: final layer must have one output");
    if (last.activations[0].kind != ActKind::identity)
        throw std::invalid_argument("DsfNetwork: final layer must be an identity-activation sum");
}

std::size_t DsfNetwork::parameter_count() const {
    std::size_t count = 0;
    for (const DsfLayer& l : layers)
        count += static_cast<std::size_t>(l.weights.size()) +
                 static_cast<std::size_t>(l.biases.size());
    return count;
}

double dsf_forward(const DsfNetwork& net, const Eigen::VectorXd& x, DsfCache* cache) {
    if (x.size() != net.input_dim)
        throw std::invalid_argument("dsf_forward: input has dim " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.input_dim));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < 0.0)
            throw std::invalid_argument("dsf_forward: negative input component at index " +
                                        std::to_string(i));

    if (cache) {
        cache->x = x;
        cache->pre.assign(net.layers.size(), Eigen::VectorXd());
        cache->post.assign(net.layers.size(), Eigen::VectorXd());
    }

    Eigen::VectorXd a = x;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DsfLayer& layer = net.layers[l];
        Eigen::VectorXd z = layer.weights * a;
        Eigen::VectorXd out(layer.out_dim());
        for (int v = 0; v < layer.out_dim(); ++v)
            out[v] = layer.activations[v](z[v]) + layer.biases[v];
        if (cache) {
            cache->pre[l] = std::move(z);
            cache->post[l] = out;
        }
        a = std::move(out);
    }
    return a[0];
}

Eigen::VectorXd indicator_vector(const ItemSubset& A) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.n);
    for (std::uint64_t b = A.bits; b;) {
        const int i = std::countr_zero(b);
        b &= b - 1;
        x[i] = 1.0;
    }
    return x;
}

double dsf_eval_set(const DsfNetwork& net, const ItemSubset& A) {
    if (A.n != net.input_dim)
        throw std::invalid_argument("dsf_eval_set: subset over " + std::to_string(A.n) +
                                    " items, network expects " +
                                    std::to_string(net.input_dim));
    return dsf_forward(net, indicator_vector(A));
}

namespace {

void check_cache(const DsfNetwork& net, const DsfCache& cache) {
    if (cache.pre.size() != net.layers.size() || cache.post.size() != net.layers.size() ||
        cache.x.size() != net.input_dim)
        throw std::invalid_argument("dsf_backward: cache does not match network");
}

} // namespace

DsfGradients dsf_backward(const DsfNetwork& net, const DsfCache& cache) {
    check_cache(net, cache);
    const std::size_t L = net.layers.size();

    DsfGradients g;
    g.dweights.resize(L);
    g.dbiases.resize(L);

    // d(out)/d(a_L) for the scalar output
    Eigen::VectorXd da = Eigen::VectorXd::Ones(1);
    for (std::size_t l = L; l-- > 0;) {
        const DsfLayer& layer = net.layers[l];
        // a_l = phi(z_l) + b_l  =>  d/db = da, d/dz = da .* phi'(z)
        g.dbiases[l] = da;
        Eigen::VectorXd dz(layer.out_dim());
        for (int v = 0; v < layer.out_dim(); ++v)
            dz[v] = da[v] * layer.activations[v].deriv(cache.pre[l][v]);
        const Eigen::VectorXd& below = (l == 0) ? cache.x : cache.post[l - 1];
        g.dweights[l].noalias() = dz * below.transpose();
        da.noalias() = layer.weights.transpose() * dz;
    }
    g.dx = std::move(da);
    return g;
}

Eigen::VectorXd dsf_input_gradient(const DsfNetwork& net, const DsfCache& cache) {
    check_cache(net, cache);
    Eigen::VectorXd da = Eigen::VectorXd::Ones(1);
    for (std::size_t l = net.layers.size(); l-- > 0;) {
        const DsfLayer& layer = net.layers[l];
        Eigen::VectorXd dz(layer.out_dim());
        for (int v = 0; v < layer.out_dim(); ++v)
            dz[v] = da[v] * layer.activations[v].deriv(cache.pre[l][v]);
        da.noalias() = layer.weights.transpose() * dz;
    }
    return da;
}

DsfNetwork init_dsf(int input_dim, const std::vector<int>& hidden_widths,
                    const Activation& hidden_act, std::uint64_t seed) {
    if (input_dim < 1) throw std::invalid_argument("init_dsf: input_dim < 1");
    for (int w : hidden_widths)
        if (w < 1) throw std::invalid_argument("init_dsf: hidden width < 1");

    Rng rng(seed);
    DsfNetwork net;
    net.input_dim = input_dim;

    auto make_layer = [&rng](int out, int in, const Activation& act) {
        DsfLayer layer;
        layer.weights.resize(out, in);
        const double hi = 1.0 / static_cast<double>(in);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) layer.weights(r, c) = rng.uniform(0.0, hi);
        layer.biases = Eigen::VectorXd::Zero(out);
        layer.activations.assign(static_cast<std::size_t>(out), act);
        return layer;
    };

    int in = input_dim;
    for (int w : hidden_widths) {
        net.layers.push_back(make_layer(w, in, hidden_act));
        in = w;
    }
    net.layers.push_back(make_layer(1, in, Activation::identity()));
    net.validate();
    return net;
}

void project_weights_nonneg(DsfNetwork& net) {
    for (DsfLayer& layer : net.layers) {
        layer.weights = layer.weights.cwiseMax(0.0);
        layer.biases = layer.biases.cwiseMax(0.0);
    }
}

} // namespace edsf
