#include <doctest.h>

#include <algorithm>

#include "gkz/error.hpp"
#include "gkz/geometry.hpp"

using namespace gkz;

namespace {

const IntMatrix kFlagship = IntMatrix::from_rows({{2, 1, 1, 2}, {0, 2, 1, 2}});

RatMatrix row(std::initializer_list<Rat> r)
{
    return RatMatrix::from_rows({std::vector<Rat>(r)});
}

} // namespace

TEST_CASE("validate_assumption_B")
{
    SUBCASE("2x4 flagship passes")
    {
        const auto diag = validate_assumption_B(kFlagship, {0, 1});
        CHECK(diag.ok);
        REQUIRE(diag.columns.size() == 2);
        CHECK(diag.columns[0].coordinates == RatVec{Rat(1, 4), Rat(1, 2)});
        CHECK(diag.columns[1].coordinates == RatVec{Rat(1, 2), Rat(1)});
    }
    SUBCASE("b(3) = (2,1) leaves the simplex")
    {
        const auto diag = validate_assumption_B(IntMatrix::from_rows({{2, 1, 2, 2}, {0, 2, 1, 2}}), {0, 1});
        CHECK_FALSE(diag.ok);
        CHECK_FALSE(diag.columns[0].ok);
        CHECK(diag.columns[0].column == 2);
        CHECK(diag.columns[0].reason.find("5/4") != std::string::npos);
        CHECK(diag.columns[1].ok);
    }
    SUBCASE("d = 1")
    {
        CHECK(validate_assumption_B(IntMatrix::from_rows({{1, 2}}), {0}).ok);
        CHECK_FALSE(validate_assumption_B(IntMatrix::from_rows({{2, 1}}), {0}).ok);
        CHECK_FALSE(validate_assumption_B(IntMatrix::from_rows({{1, -2}}), {0}).ok);
    }
    CHECK_THROWS_AS(validate_assumption_B(IntMatrix::from_rows({{1, 2}, {2, 4}}), {0, 1}), Error);
}

TEST_CASE("validate_assumption_A")
{
    CHECK(validate_assumption_A(row({Rat(1), Rat(3, 2)})).ok);
    CHECK_FALSE(validate_assumption_A(row({Rat(1), Rat(1)})).ok);
    const ReducedProblem rp = reduce_problem(kFlagship, {0, 1});
    CHECK(validate_assumption_A(rp.A).ok);
}

TEST_CASE("property: assumption on B agrees with assumption on A (exhaustive 2x4, entries <= 4)")
{
    // All column pairs (b3, b4) with entries in [0,4] over every simplex with
    // entries in [0,4] and det ≠ 0 would be 5^8; restrict σ to a few shapes.
    const std::vector<IntMatrix> simplices = {IntMatrix::from_rows({{2, 1}, {0, 2}}),
                                              IntMatrix::from_rows({{3, 1}, {1, 2}}),
                                              IntMatrix::from_rows({{4, 0}, {1, 3}})};
    int compared = 0;
    for (const auto &S : simplices) {
        for (int a = 0; a <= 4; ++a) {
            for (int b = 0; b <= 4; ++b) {
                for (int c = 0; c <= 4; ++c) {
                    for (int e = 0; e <= 4; ++e) {
                        const IntMatrix B = IntMatrix::from_rows({{S(0, 0), S(0, 1), a, c}, {S(1, 0), S(1, 1), b, e}});
                        ReducedProblem rp;
                        try {
                            rp = reduce_problem(B, {0, 1});
                        } catch (const Error &) {
                            continue;
                        }
                        const auto viaB = validate_assumption_B(B, {0, 1});
                        const auto viaA = validate_assumption_A(rp.A);
                        REQUIRE(viaB.ok == viaA.ok);
                        for (Index i = 0; i < 2; ++i) {
                            REQUIRE(viaB.columns[i].ok == viaA.columns[i].ok);
                            REQUIRE(viaB.columns[i].coordinates == viaA.columns[i].coordinates);
                        }
                        ++compared;
                    }
                }
            }
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("hull_boundary")
{
    const HullBoundary h1 = hull_boundary(row({Rat(1), Rat(2)}));
    CHECK(h1.eta == IndexSet{1});
    CHECK(h1.tau == IndexSet{1});

    const HullBoundary hid = hull_boundary(RatMatrix::identity(3));
    CHECK(hid.eta == IndexSet{0, 1, 2});
    CHECK(hid.tau == IndexSet{0, 1, 2});

    const ReducedProblem rp = reduce_problem(kFlagship, {0, 1});
    const HullBoundary h = hull_boundary(rp.A);
    CHECK(h.eta == IndexSet{0, 1, 3});
    CHECK(h.tau == IndexSet{0, 1, 3});

    // (3/4, 1/2) sits on the edge from e1 to (1/2, 1): in τ, not a vertex.
    const RatMatrix edge = RatMatrix::from_rows({{Rat(1), Rat(0), Rat(3, 4), Rat(1, 2)}, {Rat(0), Rat(1), Rat(1, 2), Rat(1)}});
    const HullBoundary he = hull_boundary(edge);
    CHECK(he.eta == IndexSet{0, 1, 3});
    CHECK(he.tau == IndexSet{0, 1, 2, 3});
    CHECK_THROWS_AS(hull_boundary(RatMatrix::identity(4)), Error);
}

TEST_CASE("nu_decomposition and the kappa dichotomy")
{
    // a(j) equal to a vertex.
    const RatMatrix dup = RatMatrix::from_rows({{Rat(1), Rat(0), Rat(1, 2), Rat(1, 2)}, {Rat(0), Rat(1), Rat(1), Rat(1)}});
    const NuDecomposition unit = nu_decomposition(dup, {0, 1, 3}, 2);
    CHECK(unit.kappa == Rat(1));

    const RatMatrix A1 = row({Rat(1), Rat(3, 4), Rat(3, 2)});
    const NuDecomposition nu1 = nu_decomposition(A1, {2}, 1);
    CHECK(nu1.nu == RatVec{Rat(1, 2)});
    CHECK(nu1.kappa == Rat(1, 2));

    const ReducedProblem rp = reduce_problem(kFlagship, {0, 1});
    const NuDecomposition nu3 = nu_decomposition(rp.A, {0, 1, 3}, 2);
    CHECK(nu3.kappa < Rat(1));
    // Independent check: (1/4,1/2) = (1/2)(1/2,1) is the Σν-minimal solution.
    CHECK(nu3.kappa == Rat(1, 2));

    // Column on the outer boundary but not a vertex has κ = 1.
    const RatMatrix edge = RatMatrix::from_rows({{Rat(1), Rat(0), Rat(3, 4), Rat(1, 2)}, {Rat(0), Rat(1), Rat(1, 2), Rat(1)}});
    CHECK(nu_decomposition(edge, {0, 1, 3}, 2).kappa == Rat(1));

    CHECK_THROWS_AS(nu_decomposition(row({Rat(1), Rat(-1), Rat(2)}), {2}, 1), Error);
}

TEST_CASE("gevrey_index")
{
    CHECK(gevrey_index(row({Rat(1), Rat(2)})) == Rat(2));
    CHECK(gevrey_index(row({Rat(1), Rat(3, 2)})) == Rat(3, 2));
    CHECK(gevrey_index(reduce_problem(kFlagship, {0, 1}).A) == Rat(3, 2));
}

TEST_CASE("property: geometry_report on admissible 2x4 matrices")
{
    int checked = 0;
    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; b <= 4; ++b) {
            for (int c = 0; c <= 4; ++c) {
                for (int e = 0; e <= 4; ++e) {
                    const IntMatrix B = IntMatrix::from_rows({{3, 1, a, c}, {1, 2, b, e}});
                    ReducedProblem rp;
                    try {
                        rp = reduce_problem(B, {0, 1});
                    } catch (const Error &) {
                        continue;
                    }
                    if (!validate_assumption_A(rp.A).ok) {
                        continue;
                    }
                    const GeometryReport g = geometry_report(rp.A);
                    CHECK(g.gevrey_index > Rat(1));
                    for (Index v : g.hull.eta) {
                        REQUIRE(std::find(g.hull.tau.begin(), g.hull.tau.end(), v) != g.hull.tau.end());
                    }
                    // The last column is a vertex under the assumption.
                    CHECK(std::find(g.hull.eta.begin(), g.hull.eta.end(), 3) != g.hull.eta.end());
                    for (const auto &[j, nu] : g.nu) {
                        const bool on_tau = std::find(g.hull.tau.begin(), g.hull.tau.end(), j) != g.hull.tau.end();
                        for (const auto &x : nu.nu) {
                            REQUIRE(x >= Rat(0));
                        }
                        if (j >= 2 && !on_tau) {
                            REQUIRE(nu.kappa < Rat(1));
                        } else if (j >= 2) {
                            REQUIRE(nu.kappa == Rat(1));
                        }
                    }
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 0);
}
