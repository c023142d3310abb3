#include "edsf/set_function.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "edsf/rng.hpp"

namespace edsf {

std::optional<MonotoneViolation> check_monotone(const SetFunctionOracle& f, double tol) {
    const int n = f.ground_size();
    if (n > 16)
        throw std::invalid_argument("check_monotone: n > 16 (exhaustive scan)");
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t a = 0; a < total; ++a) {
        const ItemSubset A(n, a);
        const double fa = f.value(A);
        for (int v = 0; v < n; ++v) {
            if (A.contains(v)) continue;
            const ItemSubset B = A.with(v);
            const double fb = f.value(B);
            if (fa > fb + tol) return MonotoneViolation{A, B, fa, fb};
        }
    }
    return std::nullopt;
}

std::optional<SubmodularViolation> check_submodular(const SetFunctionOracle& f, double tol) {
    const int n = f.ground_size();
    if (n > 12)
        throw std::invalid_argument("check_submodular: n > 12 (exhaustive scan)");
    // Tabulate first: the scan below touches each value many times.
    std::vector<double> val(1ULL << n);
    for (std::uint64_t m = 0; m < val.size(); ++m) val[m] = f.value(ItemSubset(n, m));

    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t b = 0; b < total; ++b) {
        // enumerate subsets a of b, ascending
        for (std::uint64_t a = 0;; a = (a - b) & b) {
            for (int v = 0; v < n; ++v) {
                if ((b >> v) & 1ULL) continue;
                const std::uint64_t bit = 1ULL << v;
                const double lhs = val[a | bit] - val[a];
                const double rhs = val[b | bit] - val[b];
                if (lhs < rhs - tol)
                    return SubmodularViolation{ItemSubset(n, a), ItemSubset(n, b), v, lhs, rhs};
            }
            if (a == b) break;
        }
    }
    return std::nullopt;
}

TabulatedFunction tabulate(const SetFunctionOracle& f) {
    const int n = f.ground_size();
    if (n > 24)
        throw std::invalid_argument("tabulate: n > 24 would need " +
                                    std::to_string((1ULL << n)) + " values");
    TabulatedFunction t;
    t.n = n;
    t.values.resize(1ULL << n);
    for (std::uint64_t m = 0; m < t.values.size(); ++m)
        t.values[m] = f.value(ItemSubset(n, m));
    if (t.values[0] != 0.0)
        throw std::invalid_argument("tabulate: oracle is not normalized, f(empty) = " +
                                    std::to_string(t.values[0]));
    return t;
}

TabulatedFunction gen_random_monotone(int n, std::uint64_t seed) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("gen_random_monotone: need 1 <= n <= 10");
    Rng rng(seed);
    const std::uint64_t total = 1ULL << n;
    std::vector<double> u(total);
    u[0] = 0.0;
    for (std::uint64_t m = 1; m < total; ++m) u[m] = rng.uniform();

    // f(A) = max over subsets B of A of u_B. Running max over masks: drop one
    // element at a time, so each f(A) folds in f(A \ {i}) for every i.
    TabulatedFunction t;
    t.n = n;
    t.values = u;
    for (std::uint64_t m = 1; m < total; ++m) {
        for (std::uint64_t b = m; b;) {
            const int i = std::countr_zero(b);
            b &= b - 1;
            const double sub = t.values[m & ~(1ULL << i)];
            if (sub > t.values[m]) t.values[m] = sub;
        }
    }
    return t;
}

} // namespace edsf
