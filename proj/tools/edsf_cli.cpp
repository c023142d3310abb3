// Command-line front end: generates instances and sample datasets, trains and
// evaluates models, runs the verification battery, and drives the
// social-welfare experiments. Every subcommand writes a manifest.json into its
// output directory before doing any work and completes it on success, so an
// interrupted run is detectable by its stale "running" status.
//
// Exit codes: 0 success, 1 validation or I/O error, 2 property-check failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <edsf/construct.hpp>
#include <edsf/coverage.hpp>
#include <edsf/dataset.hpp>
#include <edsf/edsf.hpp>
#include <edsf/graph.hpp>
#include <edsf/manifest.hpp>
#include <edsf/polymatroid.hpp>
#include <edsf/rng.hpp>
#include <edsf/serialize.hpp>
#include <edsf/set_function.hpp>
#include <edsf/train.hpp>
#include <edsf/welfare.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace edsf;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 1;
constexpr int kExitPropertyFailure = 2;

// ---- small helpers ----------------------------------------------------------

fs::path default_out_dir(const std::string& command) {
    const char* env = std::getenv("EDSF_OUT_DIR");
    return fs::path(env != nullptr && *env != '\0' ? env : "runs") / command;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v <= 0)
            throw std::invalid_argument(std::string(what) + ": bad entry '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument(std::string(what) + ": bad entry '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// sample standard deviation (the tables report mean/std over repeated trials)
double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

RunManifest make_manifest(const std::string& command, int argc, char** argv,
                          const json& config, std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    for (int i = 1; i < argc; ++i) m.args.emplace_back(argv[i]);
    m.config_json = config.dump();
    m.seed = seed;
    m.version = kVersion;
    return m;
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
    std::string kind;
    int items = 16;
    int universe = 100;
    int vertices = 50;
    int n = 4;
    double p = 0.3;
    int samples = 1024;
    double inclusion_p = 0.5;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a, int argc, char** argv) {
    const fs::path out = a.out.empty() ? default_out_dir("gen") : fs::path(a.out);

    json cfg;
    cfg["kind"] = a.kind;
    cfg["samples"] = a.samples;
    cfg["inclusion_p"] = a.inclusion_p;
    cfg["seed"] = a.seed;

    std::unique_ptr<SetFunctionOracle> oracle;
    std::string spec_file;
    std::string spec_text;
    if (a.kind == "coverage") {
        cfg["items"] = a.items;
        cfg["universe"] = a.universe;
        cfg["p"] = a.p;
        CoverageSpec cov =
            gen_random_coverage(a.items, a.universe, a.p, derive_seed(a.seed, 1));
        spec_file = "coverage.json";
        spec_text = coverage_to_json(cov);
        oracle = std::make_unique<CoverageOracle>(std::move(cov));
    } else if (a.kind == "cut") {
        cfg["vertices"] = a.vertices;
        cfg["p"] = a.p;
        if (a.p < 0.0 || a.p > 1.0)
            throw std::invalid_argument("gen cut: --p must lie in [0, 1]");
        GraphSpec g = gen_erdos_renyi(a.vertices, a.p, derive_seed(a.seed, 1));
        spec_file = "graph.json";
        spec_text = graph_to_json(g);
        oracle = std::make_unique<CutOracle>(std::move(g));
    } else { // monotone
        cfg["n"] = a.n;
        TabulatedFunction f = gen_random_monotone(a.n, derive_seed(a.seed, 1));
        spec_file = "tabulated.json";
        spec_text = tabulated_to_json(f);
        oracle = std::make_unique<TabulatedOracle>(std::move(f));
    }

    RunManifest m = make_manifest("gen", argc, argv, cfg, a.seed);
    manifest_begin(out, m);

    SampleDataset ds = gen_dataset(*oracle, a.samples, a.inclusion_p, derive_seed(a.seed, 2));
    write_text_file(out / spec_file, spec_text);
    write_text_file(out / "dataset.jsonl", dataset_to_jsonl(ds));

    m.outputs = {spec_file, "dataset.jsonl"};
    m.summary["samples"] = static_cast<double>(ds.size());
    m.summary["ground_size"] = static_cast<double>(ds.n);
    m.summary["f_full"] = oracle->value(ItemSubset::full_set(ds.n));
    m.summary["mean_target"] = ds.y.mean();
    manifest_complete(out, m);

    std::cout << "gen " << a.kind << ": wrote " << spec_file << " and dataset.jsonl ("
              << ds.size() << " samples over " << ds.n << " items) to " << out.string()
              << "\n";
    return 0;
}

// ---- train / eval -----------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::string config_file;
    std::string model_kind = "edsf";
    int r = -1;
    int epochs = -1;
    double lr = -1.0;
    int batch = -1;
    double alpha = -1.0;
    std::string act;
    std::string widths;
    double split = -1.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 1;
    std::string out;
};

int cmd_train(const TrainArgs& a, int argc, char** argv) {
    const fs::path out = a.out.empty() ? default_out_dir("train") : fs::path(a.out);

    TrainConfig cfg;
    if (!a.config_file.empty()) cfg = train_config_from_json(read_text_file(a.config_file));
    // flags override file values
    if (a.epochs >= 0) cfg.epochs = a.epochs;
    if (a.lr >= 0.0) cfg.learning_rate = a.lr;
    if (a.batch > 0) cfg.batch_size = a.batch;
    if (a.r > 0) cfg.r = a.r;
    if (!a.widths.empty()) cfg.layer_widths = parse_int_list(a.widths, "--widths");
    if (!a.act.empty()) {
        if (a.act == "identity") cfg.activation = Activation::identity();
        else if (a.act == "min_cap") cfg.activation = Activation::min_cap(
                     a.alpha > 0.0 ? a.alpha : 95.0);
        else if (a.act == "sqrt") cfg.activation = Activation::sqrt();
        else if (a.act == "log1p") cfg.activation = Activation::log1p();
        else throw std::invalid_argument("train: unknown --act '" + a.act + "'");
    } else if (a.alpha > 0.0) {
        cfg.activation = Activation::min_cap(a.alpha);
    }
    if (a.split > 0.0) cfg.split_ratio = a.split;
    if (a.seed_given) cfg.seed = a.seed;

    if (a.model_kind == "dsf") {
        if (a.r > 1)
            throw std::invalid_argument("train: --model dsf is a single-component model; "
                                        "--r must be 1");
        cfg.r = 1;
    } else if (a.model_kind != "edsf") {
        throw std::invalid_argument("train: --model must be 'edsf' or 'dsf'");
    }
    if (a.trials < 1) throw std::invalid_argument("train: --trials must be >= 1");
    cfg.validate();

    SampleDataset ds = dataset_from_jsonl(read_text_file(a.data));

    json jcfg = json::parse(train_config_to_json(cfg));
    jcfg["data"] = a.data;
    jcfg["model"] = a.model_kind;
    jcfg["trials"] = a.trials;
    RunManifest m = make_manifest("train", argc, argv, jcfg, cfg.seed);
    manifest_begin(out, m);

    std::vector<double> train_l1s, test_l1s;
    int best_trial = 0;
    EdsfModel best_model;
    Metrics best_metrics;

    for (int t = 0; t < a.trials; ++t) {
        TrainConfig tc = cfg;
        // trial 0 runs the root seed verbatim; later trials fan out
        tc.seed = t == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
        auto [train_set, test_set] = split_dataset(ds, tc.split_ratio, tc.seed);
        EdsfModel model = init_edsf(ds.n, tc);
        Metrics metrics = train(model, train_set, tc);
        metrics.final_test_l1 = evaluate(model, test_set);
        train_l1s.push_back(metrics.final_train_l1);
        test_l1s.push_back(metrics.final_test_l1);
        std::cout << "trial " << t << ": train L1 " << metrics.final_train_l1
                  << ", test L1 " << metrics.final_test_l1 << "\n";
        if (t == 0 || metrics.final_test_l1 < test_l1s[static_cast<std::size_t>(best_trial)]) {
            best_trial = t;
            best_model = std::move(model);
            best_metrics = std::move(metrics);
        }
    }

    const std::string model_text = a.model_kind == "dsf"
                                       ? dsf_to_json(best_model.dsfs.front())
                                       : edsf_to_json(best_model);
    write_text_file(out / "model.json", model_text);
    write_text_file(out / "metrics.csv", metrics_to_csv(best_metrics));

    json summary;
    summary["trials"] = a.trials;
    summary["train_l1"] = train_l1s;
    summary["test_l1"] = test_l1s;
    summary["train_l1_mean"] = mean_of(train_l1s);
    summary["test_l1_mean"] = mean_of(test_l1s);
    summary["train_l1_std"] = std_of(train_l1s);
    summary["test_l1_std"] = std_of(test_l1s);
    summary["test_l1_median"] = median_of(test_l1s);
    summary["best_trial"] = best_trial;
    summary["component_active"] = best_metrics.component_active;
    write_text_file(out / "summary.json", summary.dump(2));

    m.outputs = {"model.json", "metrics.csv", "summary.json"};
    m.summary["train_l1_mean"] = mean_of(train_l1s);
    m.summary["test_l1_mean"] = mean_of(test_l1s);
    m.summary["train_l1_std"] = std_of(train_l1s);
    m.summary["test_l1_std"] = std_of(test_l1s);
    m.summary["test_l1_median"] = median_of(test_l1s);
    m.summary["best_trial"] = static_cast<double>(best_trial);
    manifest_complete(out, m);

    std::cout << "train: " << a.trials << " trial(s), mean test L1 " << mean_of(test_l1s)
              << " (std " << std_of(test_l1s) << "); model of trial " << best_trial
              << " written to " << (out / "model.json").string() << "\n";
    return 0;
}

struct EvalArgs {
    std::string model;
    std::string data;
    std::string out;
};

int cmd_eval(const EvalArgs& a, int argc, char** argv) {
    const fs::path out = a.out.empty() ? default_out_dir("eval") : fs::path(a.out);
    EdsfModel model = model_from_json(read_text_file(a.model));
    SampleDataset ds = dataset_from_jsonl(read_text_file(a.data));

    json cfg;
    cfg["model"] = a.model;
    cfg["data"] = a.data;
    RunManifest m = make_manifest("eval", argc, argv, cfg, 0);
    manifest_begin(out, m);

    const double l1 = evaluate(model, ds);
    json rep;
    rep["l1"] = l1;
    rep["samples"] = ds.size();
    rep["r"] = model.r();
    write_text_file(out / "eval.json", rep.dump(2));

    m.outputs = {"eval.json"};
    m.summary["l1"] = l1;
    m.summary["samples"] = static_cast<double>(ds.size());
    manifest_complete(out, m);

    std::cout << "eval: mean L1 " << l1 << " over " << ds.size() << " samples\n";
    return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
    int n = 4;
    int functions = 50;
    int samples = 10000;
    std::uint64_t seed = 1;
    bool inject_bug = false;
    std::string out;
};

struct PropertyStat {
    long long checks = 0;
    long long failures = 0;
    std::vector<std::string> witnesses;

    void fail(const std::string& witness) {
        ++failures;
        if (witnesses.size() < 5) witnesses.push_back(witness);
    }
    json to_json() const {
        return json{{"checks", checks}, {"failures", failures}, {"witnesses", witnesses}};
    }
};

std::string vec_to_string(const Eigen::VectorXd& x) {
    std::ostringstream out;
    out.precision(12);
    out << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
    out << ")";
    return out.str();
}

int cmd_verify(const VerifyArgs& a, int argc, char** argv) {
    if (a.n < 2 || a.n > 10)
        throw std::invalid_argument(
            "verify: --n must lie in [2, 10]; the construction enumerates all 2^n "
            "subsets and the polytope checks scan 2^n constraints per point");
    if (a.functions < 1) throw std::invalid_argument("verify: --functions must be >= 1");
    if (a.samples < 1) throw std::invalid_argument("verify: --samples must be >= 1");

    const fs::path out = a.out.empty() ? default_out_dir("verify") : fs::path(a.out);
    json cfg;
    cfg["n"] = a.n;
    cfg["functions"] = a.functions;
    cfg["samples"] = a.samples;
    cfg["seed"] = a.seed;
    cfg["inject_bug"] = a.inject_bug;
    RunManifest m = make_manifest("verify", argc, argv, cfg, a.seed);
    manifest_begin(out, m);

    // --- mutation mode: negate one weight of a constructed model and require
    // the property checks to notice -------------------------------------------
    if (a.inject_bug) {
        CoverageOracle oracle(
            gen_random_coverage(a.n, 5 * a.n, 0.35, derive_seed(a.seed, 100)));
        auto [model, report] = build_edsf_from_submodular(oracle);
        // flip the largest weight in the first component's first layer,
        // deliberately bypassing validate()
        Eigen::MatrixXd& w = model.dsfs.front().layers.front().weights;
        Eigen::Index wi = 0, wj = 0;
        w.maxCoeff(&wi, &wj);
        if (w(wi, wj) <= 0.0)
            throw std::runtime_error("verify: no positive weight to negate");
        w(wi, wj) = -w(wi, wj);

        EdsfOracle mutated(model);
        std::vector<std::string> detections;
        if (auto v = check_monotone(mutated))
            detections.push_back("monotonicity: f(" + v->a.to_string() + ")=" +
                                 format_double(v->fa) + " > f(" + v->b.to_string() +
                                 ")=" + format_double(v->fb));
        if (auto v = check_submodular(mutated))
            detections.push_back("submodularity: marginal of item " +
                                 std::to_string(v->v) + " at " + v->a.to_string() + " (" +
                                 format_double(v->lhs) + ") < at " + v->b.to_string() +
                                 " (" + format_double(v->rhs) + ")");
        if (auto v = check_concavity(model, 2000, 2.0, derive_seed(a.seed, 101)))
            detections.push_back("concavity: midpoint " + format_double(v->mid) +
                                 " < chord " + format_double(v->chord) + " at lambda " +
                                 format_double(v->lambda));
        if (auto v =
                check_monotone_continuous(model, 2000, 2.0, derive_seed(a.seed, 102)))
            detections.push_back("continuous monotonicity: f" + vec_to_string(v->x) +
                                 "=" + format_double(v->fx) + " > f" +
                                 vec_to_string(v->y) + "=" + format_double(v->fy));

        json rep;
        rep["inject_bug"] = true;
        rep["mutation"] = "negated weight (" + std::to_string(wi) + "," +
                          std::to_string(wj) + ") of component 0, layer 0";
        rep["detections"] = detections;
        rep["detected"] = !detections.empty();
        write_text_file(out / "verify_report.json", rep.dump(2));
        m.outputs = {"verify_report.json"};
        m.summary["detections"] = static_cast<double>(detections.size());
        manifest_complete(out, m);

        if (detections.empty()) {
            std::cout << "[UNDETECTED] injected negated weight slipped past every "
                         "property check\n";
            return kExitValidation;
        }
        for (const std::string& d : detections) std::cout << "[DETECTED] " << d << "\n";
        std::cout << "verify: injected bug detected by " << detections.size()
                  << " check(s); failing as a property violation\n";
        return kExitPropertyFailure;
    }

    // --- the regular battery --------------------------------------------------
    PropertyStat exactness, lemma_ga, lemma_inter, lemma_min_stat, concavity,
        monotone_cont, dsf_monotone, dsf_submodular;
    const int concavity_trials = std::min(a.samples, 2000);
    std::vector<TabulatedFunction> tables; // for the pairwise min lemma
    Rng pick(derive_seed(a.seed, 7));

    for (int i = 0; i < a.functions; ++i) {
        const std::uint64_t fseed = derive_seed(a.seed, 1000 + static_cast<std::uint64_t>(i));
        std::unique_ptr<SetFunctionOracle> oracle;
        bool submodular_family = true;
        switch (i % 3) {
            case 0:
                oracle = std::make_unique<CoverageOracle>(
                    gen_random_coverage(a.n, 5 * a.n, 0.35, fseed));
                break;
            case 1:
                oracle = std::make_unique<CutOracle>(gen_erdos_renyi(a.n, 0.5, fseed));
                break;
            default:
                oracle = std::make_unique<TabulatedOracle>(gen_random_monotone(a.n, fseed));
                submodular_family = false;
                break;
        }
        TabulatedFunction table = tabulate(*oracle);

        // exact construction (submodular gadgets where possible, monotone otherwise)
        const bool is_submodular = !check_submodular(*oracle).has_value();
        auto [model, report] = is_submodular ? build_edsf_from_submodular(*oracle)
                                             : build_edsf_from_monotone(*oracle);
        ++exactness.checks;
        if (report.max_abs_error > 1e-9)
            exactness.fail("function " + std::to_string(i) + ": max |EDSF - f| = " +
                           format_double(report.max_abs_error));
        if (submodular_family && !is_submodular)
            exactness.fail("function " + std::to_string(i) +
                           ": generator produced a non-submodular instance");

        // lemma: the gadget polytope equals L_A, on three random nonempty sets
        for (int k = 0; k < 3; ++k) {
            const std::uint64_t mask =
                1 + static_cast<std::uint64_t>(
                        pick.uniform_int(0, static_cast<int>((1ULL << a.n) - 2)));
            LemmaReport rep = verify_lemma_ga(table, ItemSubset(a.n, mask), a.samples,
                                              derive_seed(fseed, 10 + static_cast<std::uint64_t>(k)));
            ++lemma_ga.checks;
            if (!rep.passed())
                lemma_ga.fail("function " + std::to_string(i) + ", A=" +
                              ItemSubset(a.n, mask).to_string() + ", point " +
                              vec_to_string(*rep.counterexample));
        }

        // lemma: intersection of the L_A equals P_f (meaningful for submodular f)
        if (is_submodular) {
            LemmaReport rep = verify_lemma_intersection(table, a.samples,
                                                        derive_seed(fseed, 20));
            ++lemma_inter.checks;
            if (!rep.passed())
                lemma_inter.fail("function " + std::to_string(i) + ", point " +
                                 vec_to_string(*rep.counterexample));
        }

        // lemma: P_{min(f, g)} equals P_f ∩ P_g, pairing consecutive functions
        if (!tables.empty()) {
            LemmaReport rep = verify_lemma_min({tables.back(), table}, a.samples,
                                               derive_seed(fseed, 30));
            ++lemma_min_stat.checks;
            if (!rep.passed())
                lemma_min_stat.fail("functions " + std::to_string(i - 1) + "+" +
                                    std::to_string(i) + ", point " +
                                    vec_to_string(*rep.counterexample));
        }
        tables.push_back(std::move(table));

        // concavity and monotonicity of the built model on the orthant
        const double fS = oracle->value(ItemSubset::full_set(a.n));
        const double box = fS > 0.0 ? 1.5 * fS : 1.0;
        ++concavity.checks;
        if (auto v = check_concavity(model, concavity_trials, box, derive_seed(fseed, 40)))
            concavity.fail("function " + std::to_string(i) + ": midpoint " +
                           format_double(v->mid) + " < chord " + format_double(v->chord));
        ++monotone_cont.checks;
        if (auto v = check_monotone_continuous(model, concavity_trials, box,
                                               derive_seed(fseed, 41)))
            monotone_cont.fail("function " + std::to_string(i) + ": f" +
                               vec_to_string(v->x) + " > f" + vec_to_string(v->y));

        // every randomly initialized DSF is monotone submodular on indicators
        static const Activation acts[] = {Activation::min_cap(1.5), Activation::sqrt(),
                                          Activation::log1p()};
        DsfNetwork net = init_dsf(a.n, {8, 6}, acts[i % 3], derive_seed(fseed, 50));
        DsfOracle net_oracle(net);
        ++dsf_monotone.checks;
        if (auto v = check_monotone(net_oracle))
            dsf_monotone.fail("net " + std::to_string(i) + ": f(" + v->a.to_string() +
                              ") > f(" + v->b.to_string() + ")");
        ++dsf_submodular.checks;
        if (auto v = check_submodular(net_oracle))
            dsf_submodular.fail("net " + std::to_string(i) + ": A=" + v->a.to_string() +
                                " B=" + v->b.to_string() + " v=" + std::to_string(v->v));
    }

    const std::vector<std::pair<const char*, const PropertyStat*>> props = {
        {"construction-exactness", &exactness},
        {"lemma-gadget-polytope", &lemma_ga},
        {"lemma-intersection", &lemma_inter},
        {"lemma-min", &lemma_min_stat},
        {"concavity", &concavity},
        {"continuous-monotonicity", &monotone_cont},
        {"dsf-monotone", &dsf_monotone},
        {"dsf-submodular", &dsf_submodular},
    };

    json rep;
    rep["inject_bug"] = false;
    bool all_passed = true;
    long long total_failures = 0;
    for (const auto& [name, stat] : props) {
        rep["properties"][name] = stat->to_json();
        total_failures += stat->failures;
        if (stat->failures > 0) all_passed = false;
        std::cout << (stat->failures == 0 ? "[PASS] " : "[FAIL] ") << name << " ("
                  << (stat->checks - stat->failures) << "/" << stat->checks << ")\n";
        for (const std::string& w : stat->witnesses) std::cout << "       " << w << "\n";
    }
    rep["all_passed"] = all_passed;
    write_text_file(out / "verify_report.json", rep.dump(2));

    m.outputs = {"verify_report.json"};
    m.summary["failures"] = static_cast<double>(total_failures);
    m.summary["functions"] = static_cast<double>(a.functions);
    manifest_complete(out, m);

    std::cout << (all_passed ? "VERIFY: PASS\n" : "VERIFY: FAIL\n");
    return all_passed ? 0 : kExitPropertyFailure;
}

// ---- welfare ----------------------------------------------------------------

struct WelfareArgs {
    int users = 3;
    int items = 8;
    int universe = 50;
    std::string probs = "0.1,0.3,0.5";
    std::string method = "ga";
    int trials = 10;
    std::uint64_t seed = 0;
    std::string round = "sample";
    std::string models; // comma-separated learned-model files (optional)
    double eta = -1.0;
    int steps = -1;
    double tol = -1.0;
    int cg_steps = -1;
    int cg_samples = -1;
    std::string out;
};

int cmd_welfare(const WelfareArgs& a, int argc, char** argv) {
    if (a.users < 1 || a.items < 1)
        throw std::invalid_argument("welfare: --users and --items must be >= 1");
    if (a.trials < 1) throw std::invalid_argument("welfare: --trials must be >= 1");
    if (a.method != "ga" && a.method != "cg" && a.method != "brute")
        throw std::invalid_argument("welfare: --method must be ga, cg, or brute");
    if (a.round != "sample" && a.round != "argmax")
        throw std::invalid_argument("welfare: --round must be sample or argmax");
    const std::vector<double> probs = parse_double_list(a.probs, "--probs");
    for (double p : probs)
        if (p <= 0.0 || p >= 1.0)
            throw std::invalid_argument("welfare: --probs entries must lie in (0, 1)");

    GaConfig ga;
    if (a.eta > 0.0) ga.eta = a.eta;
    if (a.steps > 0) ga.steps = a.steps;
    if (a.tol > 0.0) ga.tol = a.tol;
    CgConfig cg;
    if (a.cg_steps > 0) cg.steps = a.cg_steps;
    if (a.cg_samples > 0) cg.samples_per_estimate = a.cg_samples;

    // learned valuations, if provided, replace the exact coverage networks
    std::vector<EdsfModel> loaded;
    if (!a.models.empty()) {
        std::stringstream ss(a.models);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) loaded.push_back(model_from_json(read_text_file(tok)));
        if (static_cast<int>(loaded.size()) != a.users)
            throw std::invalid_argument("welfare: --models must list one file per user");
        for (const EdsfModel& mm : loaded)
            if (mm.input_dim() != a.items)
                throw std::invalid_argument(
                    "welfare: learned model input dimension != --items");
    }

    const fs::path out = a.out.empty() ? default_out_dir("welfare") : fs::path(a.out);
    json cfg;
    cfg["users"] = a.users;
    cfg["items"] = a.items;
    cfg["universe"] = a.universe;
    cfg["probs"] = probs;
    cfg["method"] = a.method;
    cfg["trials"] = a.trials;
    cfg["seed"] = a.seed;
    cfg["round"] = a.round;
    cfg["eta"] = ga.eta;
    cfg["steps"] = ga.steps;
    cfg["tol"] = ga.tol;
    cfg["cg_steps"] = cg.steps;
    cfg["cg_samples"] = cg.samples_per_estimate;
    cfg["models"] = a.models;
    RunManifest m = make_manifest("welfare", argc, argv, cfg, a.seed);
    manifest_begin(out, m);

    const double combos = std::pow(static_cast<double>(a.users), a.items);
    const bool brute_feasible = combos <= 1e7;
    if (a.method == "brute" && !brute_feasible)
        throw std::invalid_argument("welfare: users^items exceeds the brute-force cap");

    std::ostringstream csv;
    csv << "trial,method,predicted_sw,optimal_sw,efficiency\n";
    std::vector<double> efficiencies, predicted;
    m.outputs = {"welfare.csv"};

    for (int t = 0; t < a.trials; ++t) {
        const std::uint64_t inst_seed =
            derive_seed(a.seed, 10000 + static_cast<std::uint64_t>(t));

        std::vector<std::shared_ptr<SetFunctionOracle>> truth;
        std::vector<EdsfModel> models;
        for (int u = 0; u < a.users; ++u) {
            CoverageSpec cov = gen_random_coverage(
                a.items, a.universe, probs[static_cast<std::size_t>(u) % probs.size()],
                derive_seed(inst_seed, static_cast<std::uint64_t>(u)));
            if (loaded.empty()) {
                EdsfModel exact;
                exact.dsfs = {coverage_exact_dsf(cov)};
                models.push_back(std::move(exact));
            }
            truth.push_back(std::make_shared<CoverageOracle>(std::move(cov)));
        }
        if (!loaded.empty()) models = loaded;

        std::vector<int> owner;
        if (a.method == "ga") {
            GaResult res = gradient_ascent(models, a.items, ga);
            owner = round_allocation(res.a,
                                     a.round == "argmax" ? RoundMode::argmax
                                                         : RoundMode::sample,
                                     derive_seed(inst_seed, 999));
        } else if (a.method == "cg") {
            CgConfig ct = cg;
            ct.seed = derive_seed(inst_seed, 998);
            owner = continuous_greedy(truth, a.items, ct).owner;
        } else {
            owner = brute_force_optimal(truth, a.items).owner;
        }

        const double predicted_sw = social_welfare_discrete(truth, owner);
        double optimal_sw = std::numeric_limits<double>::quiet_NaN();
        double eff = std::numeric_limits<double>::quiet_NaN();
        if (brute_feasible) {
            optimal_sw = brute_force_optimal(truth, a.items).sw;
            if (optimal_sw > 0.0) {
                eff = efficiency(predicted_sw, optimal_sw);
                efficiencies.push_back(eff);
            }
        }
        predicted.push_back(predicted_sw);

        json trial;
        trial["method"] = a.method;
        trial["predicted_sw"] = predicted_sw;
        if (std::isnan(optimal_sw)) trial["optimal_sw"] = nullptr;
        else trial["optimal_sw"] = optimal_sw;
        if (std::isnan(eff)) trial["efficiency"] = nullptr;
        else trial["efficiency"] = eff;
        trial["assignment"] = owner;
        const std::string tf = "trial_" + std::to_string(t) + ".json";
        write_text_file(out / tf, trial.dump(2));
        m.outputs.push_back(tf);

        csv << t << ',' << a.method << ',' << format_double(predicted_sw) << ','
            << format_double(optimal_sw) << ',' << format_double(eff) << '\n';
        std::cout << "trial " << t << ": predicted SW " << predicted_sw;
        if (!std::isnan(eff)) std::cout << ", optimal " << optimal_sw << ", efficiency " << eff;
        std::cout << "\n";
    }

    write_text_file(out / "welfare.csv", csv.str());
    m.summary["predicted_sw_mean"] = mean_of(predicted);
    if (!efficiencies.empty()) {
        m.summary["efficiency_mean"] = mean_of(efficiencies);
        m.summary["efficiency_std"] = std_of(efficiencies);
    }
    manifest_complete(out, m);

    std::cout << "welfare (" << a.method << "): mean predicted SW " << mean_of(predicted);
    if (!efficiencies.empty()) std::cout << ", mean efficiency " << mean_of(efficiencies);
    std::cout << "; " << a.trials << " trial(s) written to " << out.string() << "\n";
    return 0;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
    std::string model;
    std::string data;
    std::string metrics;
    double split = 0.8;
    std::uint64_t seed = 0;
    std::string out;
};

void write_pred_csv(const fs::path& path, const EdsfModel& model,
                    const SampleDataset& ds) {
    std::ostringstream outcsv;
    outcsv << "truth,predicted\n";
    outcsv.precision(17);
    for (int i = 0; i < ds.size(); ++i) {
        Eigen::VectorXd x = ds.X.row(i).transpose();
        outcsv << ds.y[i] << ',' << edsf_forward(model, x) << '\n';
    }
    write_text_file(path, outcsv.str());
}

int cmd_report(const ReportArgs& a, int argc, char** argv) {
    const fs::path out = a.out.empty() ? default_out_dir("report") : fs::path(a.out);
    EdsfModel model = model_from_json(read_text_file(a.model));
    SampleDataset ds = dataset_from_jsonl(read_text_file(a.data));
    if (model.input_dim() != ds.n)
        throw std::invalid_argument("report: model and dataset dimensions differ");

    json cfg;
    cfg["model"] = a.model;
    cfg["data"] = a.data;
    cfg["metrics"] = a.metrics;
    cfg["split"] = a.split;
    cfg["seed"] = a.seed;
    RunManifest m = make_manifest("report", argc, argv, cfg, a.seed);
    manifest_begin(out, m);

    auto [train_set, test_set] = split_dataset(ds, a.split, a.seed);
    write_pred_csv(out / "train_pred.csv", model, train_set);
    write_pred_csv(out / "test_pred.csv", model, test_set);
    m.outputs = {"train_pred.csv", "test_pred.csv"};

    if (!a.metrics.empty()) {
        // re-emit the per-epoch loss under the plot-data name
        const std::string src = read_text_file(a.metrics);
        std::istringstream in(src);
        std::ostringstream loss;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first) {
                loss << "epoch,loss\n";
                first = false;
                continue;
            }
            if (!line.empty()) loss << line << '\n';
        }
        write_text_file(out / "epoch_loss.csv", loss.str());
        m.outputs.push_back("epoch_loss.csv");
    }

    m.summary["train_rows"] = static_cast<double>(train_set.size());
    m.summary["test_rows"] = static_cast<double>(test_set.size());
    manifest_complete(out, m);

    std::cout << "report: wrote " << m.outputs.size() << " CSV file(s) ("
              << train_set.size() << " train rows, " << test_set.size()
              << " test rows) to " << out.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep submodular function toolkit: exact constructions, property "
                 "verification, L1 model fitting, and social-welfare experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GenArgs ga;
    CLI::App* gen = app.add_subcommand(
        "gen", "Generate an instance (coverage / cut / monotone) plus a sample dataset");
    gen->add_option("kind", ga.kind, "Instance family: coverage, cut, or monotone")
        ->required()
        ->check(CLI::IsMember({"coverage", "cut", "monotone"}));
    gen->add_option("--items", ga.items, "Coverage: number of items (ground set size)");
    gen->add_option("--universe", ga.universe, "Coverage: universe size");
    gen->add_option("--vertices", ga.vertices, "Cut: number of vertices");
    gen->add_option("--n", ga.n, "Monotone: ground set size (<= 10)");
    gen->add_option("--p", ga.p, "Membership / edge probability");
    gen->add_option("--samples", ga.samples, "Number of dataset samples");
    gen->add_option("--inclusion-p", ga.inclusion_p,
                    "Per-item inclusion probability for sampled subsets");
    gen->add_option("--seed", ga.seed, "Root seed");
    gen->add_option("--out", ga.out, "Output directory (default $EDSF_OUT_DIR/gen)");

    TrainArgs ta;
    CLI::App* tr = app.add_subcommand("train", "Fit a model to a dataset by mini-batch "
                                               "L1 subgradient descent");
    tr->add_option("--data", ta.data, "Dataset (.jsonl) to fit")->required();
    tr->add_option("--config", ta.config_file, "TrainConfig JSON file (flags override)");
    tr->add_option("--model", ta.model_kind, "Model family: edsf or dsf (dsf forces r=1)");
    tr->add_option("--r", ta.r, "Number of component networks");
    tr->add_option("--epochs", ta.epochs, "Training epochs");
    tr->add_option("--lr", ta.lr, "Learning rate");
    tr->add_option("--batch", ta.batch, "Mini-batch size");
    tr->add_option("--alpha", ta.alpha, "min_cap activation threshold");
    tr->add_option("--act", ta.act, "Hidden activation: identity, min_cap, sqrt, log1p");
    tr->add_option("--widths", ta.widths, "Hidden layer widths, e.g. 64,64,64");
    tr->add_option("--split", ta.split, "Train fraction of the dataset");
    CLI::Option* seed_opt = tr->add_option("--seed", ta.seed, "Root seed");
    tr->add_option("--trials", ta.trials,
                   "Independent trials; the manifest aggregates mean/std");
    tr->add_option("--out", ta.out, "Output directory (default $EDSF_OUT_DIR/train)");

    EvalArgs ea;
    CLI::App* ev = app.add_subcommand("eval", "Mean L1 of a saved model on a dataset");
    ev->add_option("--model", ea.model, "Model JSON file")->required();
    ev->add_option("--data", ea.data, "Dataset (.jsonl)")->required();
    ev->add_option("--out", ea.out, "Output directory (default $EDSF_OUT_DIR/eval)");

    VerifyArgs va;
    CLI::App* vf = app.add_subcommand(
        "verify", "Exact-construction, polytope-lemma, concavity, and submodularity "
                  "battery over random oracles");
    vf->add_option("--n", va.n, "Ground set size (2..10)");
    vf->add_option("--functions", va.functions, "Number of random oracles");
    vf->add_option("--samples", va.samples, "Sample points per polytope check");
    vf->add_option("--seed", va.seed, "Root seed");
    vf->add_flag("--inject-bug", va.inject_bug,
                 "Negate one constructed weight and require the checks to catch it "
                 "(exits 2 when caught)");
    vf->add_option("--out", va.out, "Output directory (default $EDSF_OUT_DIR/verify)");

    WelfareArgs wa;
    CLI::App* wf = app.add_subcommand(
        "welfare", "Allocate items among users by projected gradient ascent, "
                   "continuous greedy, or brute force");
    wf->add_option("--users", wa.users, "Number of users");
    wf->add_option("--items", wa.items, "Number of items");
    wf->add_option("--universe", wa.universe, "Coverage universe size per user");
    wf->add_option("--probs", wa.probs, "Per-user coverage densities, e.g. 0.1,0.3,0.5");
    wf->add_option("--method", wa.method, "ga, cg, or brute");
    wf->add_option("--trials", wa.trials, "Independent instances");
    wf->add_option("--seed", wa.seed, "Root seed");
    wf->add_option("--round", wa.round, "Rounding for ga: sample or argmax");
    wf->add_option("--models", wa.models,
                   "Comma-separated learned model files, one per user (default: exact "
                   "coverage networks)");
    wf->add_option("--eta", wa.eta, "GA step size");
    wf->add_option("--steps", wa.steps, "GA step budget");
    wf->add_option("--tol", wa.tol, "GA infinity-norm stopping tolerance");
    wf->add_option("--cg-steps", wa.cg_steps, "Continuous-greedy steps (T)");
    wf->add_option("--cg-samples", wa.cg_samples, "Samples per marginal estimate");
    wf->add_option("--out", wa.out, "Output directory (default $EDSF_OUT_DIR/welfare)");

    ReportArgs ra;
    CLI::App* rp = app.add_subcommand(
        "report", "Plot-data CSVs: per-epoch loss and truth-vs-predicted pairs");
    rp->add_option("--model", ra.model, "Model JSON file")->required();
    rp->add_option("--data", ra.data, "Dataset (.jsonl)")->required();
    rp->add_option("--metrics", ra.metrics, "metrics.csv from the training run");
    rp->add_option("--split", ra.split, "Train fraction used when the model was fit");
    rp->add_option("--seed", ra.seed, "Split seed used when the model was fit");
    rp->add_option("--out", ra.out, "Output directory (default $EDSF_OUT_DIR/report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        ta.seed_given = seed_opt->count() > 0;
        if (app.got_subcommand(gen)) return cmd_gen(ga, argc, argv);
        if (app.got_subcommand(tr)) return cmd_train(ta, argc, argv);
        if (app.got_subcommand(ev)) return cmd_eval(ea, argc, argv);
        if (app.got_subcommand(vf)) return cmd_verify(va, argc, argv);
        if (app.got_subcommand(wf)) return cmd_welfare(wa, argc, argv);
        if (app.got_subcommand(rp)) return cmd_report(ra, argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation; // unreachable: require_subcommand(1)
}
