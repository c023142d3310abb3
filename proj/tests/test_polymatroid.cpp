#include <doctest.h>

#include <algorithm>
#include <vector>

#include <edsf/coverage.hpp>
#include <edsf/polymatroid.hpp>
#include <edsf/set_function.hpp>

using namespace edsf;

namespace {

TabulatedFunction rank2(int n = 3) {
    LambdaOracle f(n, [](const ItemSubset& A) {
        return static_cast<double>(std::min(A.count(), 2));
    });
    return tabulate(f);
}

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

} // namespace

TEST_CASE("greedy_vertex: worked examples on min(|A|, 2)") {
    TabulatedOracle f(rank2());
    ItemSubset full = ItemSubset::full_set(3);

    Eigen::VectorXd x = greedy_vertex(f, full, {0, 1, 2});
    CHECK(x == vec3(1, 1, 0));

    x = greedy_vertex(f, full, {2, 0, 1});
    CHECK(x == vec3(1, 0, 1));

    SUBCASE("over a strict subset") {
        Eigen::VectorXd y = greedy_vertex(f, ItemSubset(3, 0b101), {2, 0});
        CHECK(y == vec3(1, 0, 1));
    }
    SUBCASE("modular functions give the weights in any order") {
        LambdaOracle mod(3, [](const ItemSubset& A) {
            double s = 0;
            for (int i : A.items()) s += 1.0 + i;
            return s;
        });
        CHECK(greedy_vertex(mod, full, {0, 1, 2}) == vec3(1, 2, 3));
        CHECK(greedy_vertex(mod, full, {2, 1, 0}) == vec3(1, 2, 3));
    }
    SUBCASE("order must be a permutation of A") {
        CHECK_THROWS_AS(greedy_vertex(f, full, {0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(greedy_vertex(f, full, {0, 0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(greedy_vertex(f, ItemSubset(3, 0b011), {0, 2}),
                        std::invalid_argument);
    }
}

TEST_CASE("membership: worked examples on min(|A|, 2)") {
    TabulatedOracle f(rank2());
    CHECK(membership(f, vec3(1, 1, 0)));
    CHECK(!membership(f, vec3(1, 1, 1))); // full-set constraint: 3 > 2
    CHECK(membership(f, vec3(0.5, 0.5, 0.5)));
    CHECK(!membership(f, vec3(-0.1, 0, 0))); // negativity
    CHECK(!membership(f, vec3(1.5, 0, 0)));  // singleton constraint
    CHECK(membership(f, vec3(0, 0, 0)));
}

TEST_CASE("la_membership: worked example") {
    TabulatedFunction f = rank2();
    LAPolytope L = la_polytope_from(f, ItemSubset(3, 0b011));
    CHECK(L.c_A == 2.0);
    CHECK(L.c_out[2] == 1.0);
    CHECK(la_membership(L, vec3(2, 0, 1)));
    CHECK(!la_membership(L, vec3(2, 1, 0))); // in-A sum 3 > 2
    CHECK(!la_membership(L, vec3(0, 0, 1.5))); // out-of-A cap
    CHECK(!la_membership(L, vec3(-0.5, 0, 0)));
    // the in-A coordinates are only constrained jointly
    CHECK(la_membership(L, vec3(0, 2, 0)));
}

TEST_CASE("greedy vertices of submodular functions are tight polytope members") {
    CoverageOracle f(gen_random_coverage(5, 25, 0.3, 13));
    const ItemSubset full = ItemSubset::full_set(5);
    const double fS = f.value(full);
    std::vector<std::vector<int>> orders = {
        {0, 1, 2, 3, 4}, {4, 3, 2, 1, 0}, {2, 0, 4, 1, 3}};
    for (const auto& order : orders) {
        Eigen::VectorXd x = greedy_vertex(f, full, order);
        CHECK(membership(f, x));
        CHECK(x.sum() == doctest::Approx(fS).epsilon(1e-12));
        CHECK(!membership(f, 1.001 * x + Eigen::VectorXd::Constant(5, 1e-3)));
    }
}

TEST_CASE("lemma check: P_{g_A} equals L_A") {
    TabulatedFunction f = rank2();
    for (std::uint64_t a = 1; a < 8; ++a) {
        LemmaReport rep = verify_lemma_ga(f, ItemSubset(3, a), 300, 50 + a);
        CHECK(rep.passed());
        CHECK(rep.points_checked > 300);
    }
    SUBCASE("coverage instance") {
        TabulatedFunction cov = tabulate(CoverageOracle(gen_random_coverage(4, 20, 0.3, 4)));
        for (std::uint64_t a : {1ULL, 5ULL, 15ULL})
            CHECK(verify_lemma_ga(cov, ItemSubset(4, a), 200, a).passed());
    }
}

TEST_CASE("lemma check: the intersection of the L_A equals P_f") {
    CHECK(verify_lemma_intersection(rank2(), 300, 60).passed());
    TabulatedFunction cov = tabulate(CoverageOracle(gen_random_coverage(4, 20, 0.3, 4)));
    CHECK(verify_lemma_intersection(cov, 200, 61).passed());
}

TEST_CASE("lemma check: P_{min f_i} equals the intersection of the P_{f_i}") {
    TabulatedFunction f1 = rank2();
    LambdaOracle mod(3, [](const ItemSubset& A) {
        double s = 0;
        for (int i : A.items()) s += 0.9 + 0.3 * i;
        return s;
    });
    TabulatedFunction f2 = tabulate(mod);
    CHECK(verify_lemma_min({f1, f2}, 300, 62).passed());

    TabulatedFunction f3 = tabulate(CoverageOracle(gen_random_coverage(3, 10, 0.4, 9)));
    CHECK(verify_lemma_min({f1, f2, f3}, 300, 63).passed());
}
