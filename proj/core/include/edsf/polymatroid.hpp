#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

inline constexpr double kPolytopeTolerance = 1e-9;

// The polytope L_A of a gadget: x >= 0, x(A) <= c_A, and x_j <= c_j for every
// coordinate j outside A.
struct LAPolytope {
    int n = 0;
    ItemSubset A;
    double c_A = 0.0;
    std::vector<double> c_out; // per coordinate; consulted only for j outside A
};

// Builds L_A from a tabulation: c_A = f(A), c_j = f({j}).
LAPolytope la_polytope_from(const TabulatedFunction& f, const ItemSubset& A);

bool la_membership(const LAPolytope& L, const Eigen::VectorXd& x,
                   double tol = kPolytopeTolerance);

// Brute-force polymatroid membership: x >= 0 and x(A) <= f(A) + tol for every
// subset A. n <= 14 (2^n constraint scan).
bool membership(const SetFunctionOracle& f, const Eigen::VectorXd& x,
                double tol = kPolytopeTolerance);

// The greedy vertex along `order` (a permutation of A's items):
// x_{a_i} = f({a_1..a_i}) - f({a_1..a_{i-1}}), zero off A. For monotone
// submodular f this lies in P_f and attains x(A) = f(A); for non-submodular
// input the point may fall outside P_f, which callers detect via membership.
Eigen::VectorXd greedy_vertex(const SetFunctionOracle& f, const ItemSubset& A,
                              const std::vector<int>& order);

struct LemmaReport {
    long long points_checked = 0;
    std::optional<Eigen::VectorXd> counterexample; // first disagreeing point
    bool passed() const { return !counterexample.has_value(); }
};

// Polytope-equality checks by dual membership over random points in
// [0, 1.5 f(S)]^n plus structured points (greedy vertices, axis points,
// scaled sums). Any disagreement between the two predicates is returned as a
// counterexample.

// P_{g_A} == L_A, where g_A is the built gadget tabulated as a set function.
LemmaReport verify_lemma_ga(const TabulatedFunction& f, const ItemSubset& A,
                            int samples, std::uint64_t seed);

// Intersection of L_A over all nonempty A == P_f.
LemmaReport verify_lemma_intersection(const TabulatedFunction& f, int samples,
                                      std::uint64_t seed);

// P_{min_i f_i} == intersection of the P_{f_i}.
LemmaReport verify_lemma_min(const std::vector<TabulatedFunction>& fs, int samples,
                             std::uint64_t seed);

} // namespace edsf
