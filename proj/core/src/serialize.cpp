#include "edsf/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace edsf {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::invalid_argument(std::string(what) + ": malformed JSON");
    return j;
}

json act_to_json(const Activation& a) {
    json j;
    switch (a.kind) {
        case ActKind::identity: j["kind"] = "identity"; break;
        case ActKind::min_cap:
            j["kind"] = "min_cap";
            j["alpha"] = a.alpha;
            break;
        case ActKind::sqrt: j["kind"] = "sqrt"; break;
        case ActKind::log1p: j["kind"] = "log1p"; break;
    }
    return j;
}

Activation act_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return Activation::identity();
    if (kind == "min_cap") return Activation::min_cap(j.at("alpha").get<double>());
    if (kind == "sqrt") return Activation::sqrt();
    if (kind == "log1p") return Activation::log1p();
    throw std::invalid_argument("activation: unknown kind '" + kind + "'");
}

json layer_to_json(const DsfLayer& layer) {
    json w = json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
            row.push_back(layer.weights(r, c));
        w.push_back(std::move(row));
    }
    json b = json::array();
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i) b.push_back(layer.biases[i]);

    // one "act" object when the whole layer shares an activation, else an
    // array with one entry per node (the constructed gadgets mix kinds)
    bool uniform = true;
    for (const Activation& a : layer.activations)
        if (!(a == layer.activations.front())) { uniform = false; break; }

    json j;
    j["w"] = std::move(w);
    j["b"] = std::move(b);
    if (uniform) {
        j["act"] = act_to_json(layer.activations.front());
    } else {
        json acts = json::array();
        for (const Activation& a : layer.activations) acts.push_back(act_to_json(a));
        j["act"] = std::move(acts);
    }
    return j;
}

DsfLayer layer_from_json(const json& j) {
    DsfLayer layer;
    const json& w = j.at("w");
    if (!w.is_array() || w.empty())
        throw std::invalid_argument("dsf layer: 'w' must be a non-empty array");
    const std::size_t rows = w.size();
    const std::size_t cols = w[0].size();
    layer.weights.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (w[r].size() != cols)
            throw std::invalid_argument("dsf layer: ragged weight rows");
        for (std::size_t c = 0; c < cols; ++c)
            layer.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                w[r][c].get<double>();
    }
    const json& b = j.at("b");
    layer.biases.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i)
        layer.biases[static_cast<Eigen::Index>(i)] = b[i].get<double>();

    const json& act = j.at("act");
    if (act.is_array()) {
        for (const json& a : act) layer.activations.push_back(act_from_json(a));
    } else {
        layer.activations.assign(rows, act_from_json(act));
    }
    return layer;
}

json dsf_to_json_obj(const DsfNetwork& net) {
    json j;
    j["kind"] = "dsf";
    j["input_dim"] = net.input_dim;
    json layers = json::array();
    for (const DsfLayer& l : net.layers) layers.push_back(layer_to_json(l));
    j["layers"] = std::move(layers);
    return j;
}

DsfNetwork dsf_from_json_obj(const json& j) {
    if (j.at("kind").get<std::string>() != "dsf")
        throw std::invalid_argument("dsf model: kind is not 'dsf'");
    DsfNetwork net;
    net.input_dim = j.at("input_dim").get<int>();
    for (const json& l : j.at("layers")) net.layers.push_back(layer_from_json(l));
    net.validate(); // rejects negative weights, broken dimensions, bad alphas
    return net;
}

} // namespace

std::string coverage_to_json(const CoverageSpec& spec) {
    json j;
    j["n_items"] = spec.n_items;
    j["universe_size"] = spec.universe_size;
    j["membership"] = spec.membership;
    j["weights"] = spec.weights;
    return j.dump();
}

CoverageSpec coverage_from_json(const std::string& text) {
    const json j = parse(text, "coverage");
    CoverageSpec spec;
    spec.n_items = j.at("n_items").get<int>();
    spec.universe_size = j.at("universe_size").get<int>();
    spec.membership = j.at("membership").get<std::vector<std::vector<int>>>();
    spec.weights = j.at("weights").get<std::vector<double>>();
    spec.validate();
    return spec;
}

std::string graph_to_json(const GraphSpec& g) {
    json j;
    j["n"] = g.n_vertices;
    json edges = json::array();
    for (auto [u, v] : g.edges) edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    return j.dump();
}

GraphSpec graph_from_json(const std::string& text) {
    const json j = parse(text, "graph");
    GraphSpec g;
    g.n_vertices = j.at("n").get<int>();
    for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph: each edge must be a [u,v] pair");
        g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    g.validate();
    return g;
}

std::string tabulated_to_json(const TabulatedFunction& f) {
    json j;
    j["n"] = f.n;
    j["values"] = f.values;
    return j.dump();
}

TabulatedFunction tabulated_from_json(const std::string& text) {
    const json j = parse(text, "tabulated");
    TabulatedFunction f;
    f.n = j.at("n").get<int>();
    f.values = j.at("values").get<std::vector<double>>();
    if (f.n < 1 || f.values.size() != (1ULL << f.n))
        throw std::invalid_argument("tabulated: values length must be 2^n");
    if (f.values[0] != 0.0)
        throw std::invalid_argument("tabulated: value at the empty set must be 0");
    return f;
}

std::string dsf_to_json(const DsfNetwork& net) { return dsf_to_json_obj(net).dump(); }

DsfNetwork dsf_from_json(const std::string& text) {
    return dsf_from_json_obj(parse(text, "dsf model"));
}

std::string edsf_to_json(const EdsfModel& model) {
    json j;
    j["kind"] = "edsf";
    json dsfs = json::array();
    for (const DsfNetwork& net : model.dsfs) dsfs.push_back(dsf_to_json_obj(net));
    j["dsfs"] = std::move(dsfs);
    return j.dump();
}

EdsfModel edsf_from_json(const std::string& text) {
    const json j = parse(text, "edsf model");
    if (j.at("kind").get<std::string>() != "edsf")
        throw std::invalid_argument("edsf model: kind is not 'edsf'");
    EdsfModel model;
    for (const json& d : j.at("dsfs")) model.dsfs.push_back(dsf_from_json_obj(d));
    model.validate();
    return model;
}

EdsfModel model_from_json(const std::string& text) {
    const json j = parse(text, "model");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dsf") {
        EdsfModel m;
        m.dsfs.push_back(dsf_from_json_obj(j));
        return m;
    }
    if (kind == "edsf") return edsf_from_json(text);
    throw std::invalid_argument("model: unknown kind '" + kind + "'");
}

std::string report_to_json(const ConstructionReport& report) {
    json j;
    j["n"] = report.n;
    j["r"] = report.r;
    j["max_abs_error"] = report.max_abs_error;
    return j.dump();
}

std::string train_config_to_json(const TrainConfig& cfg) {
    json j;
    j["epochs"] = cfg.epochs;
    j["learning_rate"] = cfg.learning_rate;
    j["batch_size"] = cfg.batch_size;
    j["r"] = cfg.r;
    j["layer_widths"] = cfg.layer_widths;
    j["activation"] = act_to_json(cfg.activation);
    j["split_ratio"] = cfg.split_ratio;
    j["seed"] = cfg.seed;
    return j.dump();
}

TrainConfig train_config_from_json(const std::string& text) {
    const json j = parse(text, "train config");
    TrainConfig cfg;
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
    if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
    if (j.contains("r")) cfg.r = j["r"].get<int>();
    if (j.contains("layer_widths")) cfg.layer_widths = j["layer_widths"].get<std::vector<int>>();
    if (j.contains("activation")) cfg.activation = act_from_json(j["activation"]);
    if (j.contains("split_ratio")) cfg.split_ratio = j["split_ratio"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

std::string dataset_to_jsonl(const SampleDataset& ds) {
    std::ostringstream out;
    for (int i = 0; i < ds.size(); ++i) {
        json j;
        json x = json::array();
        for (int c = 0; c < ds.n; ++c) x.push_back(static_cast<int>(ds.X(i, c)));
        j["x"] = std::move(x);
        j["y"] = ds.y[i];
        out << j.dump() << '\n';
    }
    return out.str();
}

SampleDataset dataset_from_jsonl(const std::string& text) {
    SampleDataset ds;
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse(line, "dataset line");
        std::vector<double> x;
        for (const json& v : j.at("x")) x.push_back(v.get<double>());
        if (!rows.empty() && x.size() != rows.front().size())
            throw std::invalid_argument("dataset: inconsistent x length at line " +
                                        std::to_string(lineno));
        rows.push_back(std::move(x));
        targets.push_back(j.at("y").get<double>());
    }
    if (rows.empty()) throw std::invalid_argument("dataset: no samples");
    ds.n = static_cast<int>(rows.front().size());
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), ds.n);
    ds.y.resize(static_cast<Eigen::Index>(targets.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < ds.n; ++c) ds.X(static_cast<Eigen::Index>(i), c) = rows[i][c];
        ds.y[static_cast<Eigen::Index>(i)] = targets[i];
    }
    ds.validate();
    return ds;
}

std::string metrics_to_csv(const Metrics& m) {
    std::ostringstream out;
    out << "epoch,train_loss\n";
    out.precision(17);
    for (std::size_t e = 0; e < m.train_loss.size(); ++e)
        out << e << ',' << m.train_loss[e] << '\n';
    return out.str();
}

std::string metrics_summary_to_json(const Metrics& m) {
    json j;
    j["train_l1"] = m.final_train_l1;
    j["test_l1"] = m.final_test_l1;
    j["component_active"] = m.component_active;
    return j.dump();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace edsf
