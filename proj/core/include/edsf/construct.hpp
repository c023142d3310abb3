#pragma once

#include <utility>

#include "edsf/coverage.hpp"
#include "edsf/dsf.hpp"
#include "edsf/edsf.hpp"
#include "edsf/set_function.hpp"
#include "edsf/subset.hpp"

namespace edsf {

// Result of re-verifying a constructed model against its source oracle over
// every subset. Exactness is an asserted postcondition of the builders, not
// an assumption.
struct ConstructionReport {
    int n = 0;
    int r = 0;
    double max_abs_error = 0.0;
};

// Two-layer gadget for a normalized f (tabulated) and a set A:
//   g_A(B) = min(sum_{j in A∩B} c_A, c_A) + sum_{k in B\A} c_k
// with c_A = f(A) and c_j = f({j}). Realized as a capped "lower" node over
// the coordinates of A plus an identity "upper" node over the rest, summed by
// a unit-weight output node. g_A dominates every submodular f with
// g_A(A) = f(A).
DsfNetwork build_gA(const TabulatedFunction& f, const ItemSubset& A);

// Monotone-case gadget:
//   g_B(A) = min(sum_{j in A∩B} f(B), f(B)) + sum_{k in A\B} w*,  w* = f(S).
// Same two-node shape; in-B weights and cap are f(B), out-of-B weights are
// the global maximum w*.
DsfNetwork build_gB_monotone(const TabulatedFunction& f, const ItemSubset& B);

// Exact representation of a normalized monotone submodular f as the minimum
// of the g_A gadgets over every nonempty A (g_empty adds no constraint).
// n <= 16; preconditions are brute-force checked where feasible
// (submodularity scan up to n = 12), and the built model is always
// re-verified against f on all 2^n subsets.
std::pair<EdsfModel, ConstructionReport>
build_edsf_from_submodular(const SetFunctionOracle& f);

// Exact representation of an arbitrary normalized monotone f as the minimum
// of g_B gadgets over every nonempty B. n <= 16.
std::pair<EdsfModel, ConstructionReport>
build_edsf_from_monotone(const SetFunctionOracle& f);

// Exact two-layer DSF for a coverage function: one min_cap(1) node per
// universe element detecting "covered", weighted by w(u) at the output. On
// indicator inputs it reproduces coverage_eval exactly, and it is concave on
// the whole non-negative orthant, which makes it a ready-made valuation
// model for the welfare relaxation.
DsfNetwork coverage_exact_dsf(const CoverageSpec& spec);

} // namespace edsf
