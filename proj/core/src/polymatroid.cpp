#include "edsf/polymatroid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "edsf/construct.hpp"
#include "edsf/dsf.hpp"
#include "edsf/rng.hpp"

namespace edsf {

LAPolytope la_polytope_from(const TabulatedFunction& f, const ItemSubset& A) {
    if (A.n != f.n) throw std::invalid_argument("la_polytope_from: dimension mismatch");
    LAPolytope L;
    L.n = f.n;
    L.A = A;
    L.c_A = f.value(A);
    L.c_out.resize(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j) L.c_out[j] = f.values[1ULL << j];
    return L;
}

bool la_membership(const LAPolytope& L, const Eigen::VectorXd& x, double tol) {
    if (x.size() != L.n) throw std::invalid_argument("la_membership: dimension mismatch");
    double in_sum = 0.0;
    for (int j = 0; j < L.n; ++j) {
        if (x[j] < -tol) return false;
        if (L.A.contains(j))
            in_sum += x[j];
        else if (x[j] > L.c_out[j] + tol)
            return false;
    }
    return in_sum <= L.c_A + tol;
}

bool membership(const SetFunctionOracle& f, const Eigen::VectorXd& x, double tol) {
    const int n = f.ground_size();
    if (x.size() != n) throw std::invalid_argument("membership: dimension mismatch");
    if (n > 14)
        throw std::invalid_argument("membership: n > 14 (2^n constraint scan)");
    for (int j = 0; j < n; ++j)
        if (x[j] < -tol) return false;

    // x(A) accumulated in ascending coordinate order for every subset, so the
    // arithmetic matches la_membership bit-for-bit on shared constraints.
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        double sum = 0.0;
        for (std::uint64_t b = mask; b;) {
            const int j = std::countr_zero(b);
            b &= b - 1;
            sum += x[j];
        }
        if (sum > f.value(ItemSubset(n, mask)) + tol) return false;
    }
    return true;
}

Eigen::VectorXd greedy_vertex(const SetFunctionOracle& f, const ItemSubset& A,
                              const std::vector<int>& order) {
    const int n = f.ground_size();
    if (A.n != n) throw std::invalid_argument("greedy_vertex: dimension mismatch");
    if (static_cast<int>(order.size()) != A.count())
        throw std::invalid_argument("greedy_vertex: order must enumerate A exactly");
    ItemSubset seen = ItemSubset::empty_set(n);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    double prev = f.value(seen);
    for (int a : order) {
        if (!A.contains(a) || seen.contains(a))
            throw std::invalid_argument("greedy_vertex: order is not a permutation of A");
        seen = seen.with(a);
        const double cur = f.value(seen);
        x[a] = cur - prev;
        prev = cur;
    }
    return x;
}

namespace {

std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.uniform_int(0, i)]);
    return p;
}

// scale factors that put structured points just inside / on / just outside
// the polytope boundaries
constexpr double kScales[] = {0.5, 0.999999, 1.0, 1.000001, 1.5};

void add_scaled(std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& x) {
    for (double s : kScales) points.push_back(s * x);
}

// Random box points plus greedy vertices and axis points of the given
// oracle(s) -- the shared sampling scheme of all three lemma checks.
std::vector<Eigen::VectorXd> sampling_points(const std::vector<const SetFunctionOracle*>& fs,
                                             double box_hi, int samples, Rng& rng) {
    const int n = fs.front()->ground_size();
    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<std::size_t>(samples) + 64);

    points.push_back(Eigen::VectorXd::Zero(n));
    Eigen::VectorXd x(n);
    for (int t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, box_hi);
        points.push_back(x);
    }

    const ItemSubset full = ItemSubset::full_set(n);
    for (const SetFunctionOracle* f : fs) {
        // greedy vertices over random ground-set orders
        for (int k = 0; k < 8; ++k)
            add_scaled(points, greedy_vertex(*f, full, random_permutation(n, rng)));
        // axis points c_j e_j and their sum
        Eigen::VectorXd axis_sum = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[j] = f->value(ItemSubset::singleton(n, j));
            add_scaled(points, e);
            axis_sum += e;
        }
        add_scaled(points, axis_sum);
    }
    return points;
}

} // namespace

LemmaReport verify_lemma_ga(const TabulatedFunction& f, const ItemSubset& A, int samples,
                            std::uint64_t seed) {
    if (f.n > 10) throw std::invalid_argument("verify_lemma_ga: n > 10");
    Rng rng(seed);
    const LAPolytope L = la_polytope_from(f, A);

    const DsfNetwork gadget = build_gA(f, A);
    const DsfOracle gadget_fn(gadget);
    const TabulatedOracle g_tab(tabulate(gadget_fn));

    LemmaReport report;
    const double box_hi = 1.5 * f.values.back();
    for (const Eigen::VectorXd& x : sampling_points({&g_tab}, box_hi, samples, rng)) {
        ++report.points_checked;
        if (la_membership(L, x) != membership(g_tab, x)) {
            report.counterexample = x;
            return report;
        }
    }
    return report;
}

LemmaReport verify_lemma_intersection(const TabulatedFunction& f, int samples,
                                      std::uint64_t seed) {
    if (f.n > 10) throw std::invalid_argument("verify_lemma_intersection: n > 10");
    Rng rng(seed);
    const int n = f.n;

    std::vector<LAPolytope> las;
    const std::uint64_t total = 1ULL << n;
    las.reserve(total - 1);
    for (std::uint64_t mask = 1; mask < total; ++mask)
        las.push_back(la_polytope_from(f, ItemSubset(n, mask)));

    const TabulatedOracle f_oracle{TabulatedFunction{f}};

    LemmaReport report;
    const double box_hi = 1.5 * f.values.back();
    for (const Eigen::VectorXd& x : sampling_points({&f_oracle}, box_hi, samples, rng)) {
        ++report.points_checked;
        bool in_all = true;
        for (const LAPolytope& L : las)
            if (!la_membership(L, x)) {
                in_all = false;
                break;
            }
        if (in_all != membership(f_oracle, x)) {
            report.counterexample = x;
            return report;
        }
    }
    return report;
}

LemmaReport verify_lemma_min(const std::vector<TabulatedFunction>& fs, int samples,
                             std::uint64_t seed) {
    if (fs.empty()) throw std::invalid_argument("verify_lemma_min: empty family");
    const int n = fs.front().n;
    if (n > 10) throw std::invalid_argument("verify_lemma_min: n > 10");
    for (const TabulatedFunction& f : fs)
        if (f.n != n) throw std::invalid_argument("verify_lemma_min: mixed dimensions");

    // pointwise minimum tabulation
    TabulatedFunction h;
    h.n = n;
    h.values = fs.front().values;
    for (std::size_t i = 1; i < fs.size(); ++i)
        for (std::size_t m = 0; m < h.values.size(); ++m)
            h.values[m] = std::min(h.values[m], fs[i].values[m]);

    Rng rng(seed);
    std::vector<TabulatedOracle> oracles;
    oracles.reserve(fs.size() + 1);
    for (const TabulatedFunction& f : fs) oracles.emplace_back(TabulatedFunction{f});
    const TabulatedOracle h_oracle{TabulatedFunction{h}};

    std::vector<const SetFunctionOracle*> all;
    for (const TabulatedOracle& o : oracles) all.push_back(&o);
    all.push_back(&h_oracle);

    LemmaReport report;
    const double box_hi = 1.5 * h.values.back();
    for (const Eigen::VectorXd& x : sampling_points(all, box_hi, samples, rng)) {
        ++report.points_checked;
        bool in_every = true;
        for (const TabulatedOracle& o : oracles)
            if (!membership(o, x)) {
                in_every = false;
                break;
            }
        if (in_every != membership(h_oracle, x)) {
            report.counterexample = x;
            return report;
        }
    }
    return report;
}

} // namespace edsf
