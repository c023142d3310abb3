#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "edsf/subset.hpp"

namespace edsf {

// Oracle over subsets of {0..n-1}. Implementations must be deterministic and
// normalized (value(empty) == 0) unless documented otherwise.
class SetFunctionOracle {
public:
    virtual ~SetFunctionOracle() = default;
    virtual int ground_size() const = 0;
    virtual double value(const ItemSubset& A) const = 0;
};

// Wraps a plain callable as an oracle; handy for tests and small fixtures.
class LambdaOracle final : public SetFunctionOracle {
public:
    LambdaOracle(int n, std::function<double(const ItemSubset&)> fn)
        : n_(n), fn_(std::move(fn)) {}
    int ground_size() const override { return n_; }
    double value(const ItemSubset& A) const override { return fn_(A); }

private:
    int n_;
    std::function<double(const ItemSubset&)> fn_;
};

// Dense table of all 2^n values, indexed by subset mask.
struct TabulatedFunction {
    int n = 0;
    std::vector<double> values; // size 2^n, values[0] == 0

    double value_mask(std::uint64_t mask) const { return values[mask]; }
    double value(const ItemSubset& A) const { return values[A.bits]; }
};

class TabulatedOracle final : public SetFunctionOracle {
public:
    explicit TabulatedOracle(TabulatedFunction t) : t_(std::move(t)) {}
    int ground_size() const override { return t_.n; }
    double value(const ItemSubset& A) const override { return t_.value(A); }
    const TabulatedFunction& table() const { return t_; }

private:
    TabulatedFunction t_;
};

// ---- property checkers ------------------------------------------------------

inline constexpr double kCheckTolerance = 1e-9;

struct MonotoneViolation {
    ItemSubset a; // the smaller set
    ItemSubset b; // a plus one element
    double fa = 0.0, fb = 0.0;
};

struct SubmodularViolation {
    ItemSubset a;
    ItemSubset b; // a subset of b
    int v = 0;    // element outside b
    double lhs = 0.0, rhs = 0.0; // f(A+v)-f(A) vs f(B+v)-f(B)
};

// Exhaustive monotonicity check over single-element extensions (sufficient by
// chaining). n <= 16. Returns the first violation or nullopt on pass.
std::optional<MonotoneViolation> check_monotone(const SetFunctionOracle& f,
                                                double tol = kCheckTolerance);

// Exhaustive diminishing-returns check over all (A subset of B, v outside B).
// n <= 12. Returns the first violation in (B ascending, A ascending, v
// ascending) order, or nullopt on pass.
std::optional<SubmodularViolation> check_submodular(const SetFunctionOracle& f,
                                                    double tol = kCheckTolerance);

// ---- tabulation and fixtures ------------------------------------------------

// Evaluates f on all 2^n subsets (n <= 24). Rejects non-normalized input.
TabulatedFunction tabulate(const SetFunctionOracle& f);

// Random monotone normalized fixture: u_A ~ U[0,1] i.i.d. with u_empty = 0,
// f(A) = max_{B subseteq A} u_B. Monotone by construction, generally not
// submodular. n <= 10.
TabulatedFunction gen_random_monotone(int n, std::uint64_t seed);

} // namespace edsf
