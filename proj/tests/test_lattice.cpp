#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "gkz/error.hpp"
#include "gkz/lattice.hpp"

using namespace gkz;

namespace {

IntMatrix int_product(const IntMatrix &a, const IntMatrix &b)
{
    IntMatrix c(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            for (Index k = 0; k < a.cols(); ++k) {
                c(i, j) += a(i, k) * b(k, j);
            }
        }
    }
    return c;
}

// (ᵗM)⁻¹x reduced mod ℤ^d by Cramer's rule on 2×2 or 1×1 matrices.
RatVec dual_class(const IntMatrix &M, const IntVec &x)
{
    if (M.rows() == 1) {
        return {Rat(x[0], M(0, 0)) - Rat(floor(Rat(x[0], M(0, 0))))};
    }
    const std::int64_t det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    // ᵗM = [[a, c], [b, d]] for M = [[a, b], [c, d]].
    const Rat u(M(1, 1) * x[0] - M(1, 0) * x[1], det);
    const Rat v(-M(0, 1) * x[0] + M(0, 0) * x[1], det);
    return {u - Rat(floor(u)), v - Rat(floor(v))};
}

} // namespace

TEST_CASE("rationals: parsing, floor and mod")
{
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-0.25") == Rat(-1, 4));
    CHECK(parse_rational("-1.5e-1") == Rat(-3, 20));
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK(floor(Rat(-1, 2)) == -1);
    CHECK(floor(Rat(7, 2)) == 3);
    CHECK(mod(Rat(-1, 3), Rat(2)) == Rat(5, 3));
    CHECK(lcm_of_denominators({Rat(1, 4), Rat(1, 6), Rat(2)}) == 12);
    CHECK(to_string(Rat(-3, 4)) == "-3/4");
    // Inside doctest's decomposition Boost's own template would recurse.
    const bool mixed = Rat(2) == 2;
    CHECK(mixed);
}

TEST_CASE("rank, determinant and inverse are exact")
{
    const RatMatrix m = RatMatrix::from_rows({{Rat(2), Rat(1)}, {Rat(0), Rat(2)}});
    CHECK(determinant(m) == Rat(4));
    CHECK(rank(m) == 2);
    CHECK(inverse(m) * m == RatMatrix::identity(2));
    const RatMatrix s = RatMatrix::from_rows({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}});
    CHECK(rank(s) == 1);
    CHECK_THROWS_AS(inverse(s), Error);
}

TEST_CASE("reduce_problem on the flagship matrices")
{
    SUBCASE("B = (1,2)")
    {
        const ReducedProblem rp = reduce_problem(IntMatrix::from_rows({{1, 2}}), {0});
        CHECK(rp.A == RatMatrix::from_rows({{Rat(1), Rat(2)}}));
        CHECK(rp.q == IntVec{1});
        CHECK(rp.lattice_index == 1);
    }
    SUBCASE("B = (2,3)")
    {
        const ReducedProblem rp = reduce_problem(IntMatrix::from_rows({{2, 3}}), {0});
        CHECK(rp.A == RatMatrix::from_rows({{Rat(1), Rat(3, 2)}}));
        CHECK(rp.q == IntVec{2});
        CHECK(rp.lattice_index == 2);
    }
    SUBCASE("2x4")
    {
        const ReducedProblem rp = reduce_problem(IntMatrix::from_rows({{2, 1, 1, 2}, {0, 2, 1, 2}}), {0, 1});
        CHECK(rp.a(0) == RatVec{Rat(1), Rat(0)});
        CHECK(rp.a(1) == RatVec{Rat(0), Rat(1)});
        CHECK(rp.a(2) == RatVec{Rat(1, 4), Rat(1, 2)});
        CHECK(rp.a(3) == RatVec{Rat(1, 2), Rat(1)});
        CHECK(rp.q == IntVec{4, 2});
        CHECK(rp.lattice_index == 4);
    }
    SUBCASE("sigma not first is reordered")
    {
        const ReducedProblem rp = reduce_problem(IntMatrix::from_rows({{3, 2}}), {1});
        CHECK(rp.column_order == IndexSet{1, 0});
        CHECK(rp.A == RatMatrix::from_rows({{Rat(1), Rat(3, 2)}}));
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(reduce_problem(IntMatrix::from_rows({{1, 2}, {2, 4}}), {0, 1}), Error);
        // Columns span 2ℤ.
        CHECK_THROWS_AS(reduce_problem(IntMatrix::from_rows({{2, 4}}), {0}), Error);
    }
}

TEST_CASE("property: B_sigma times A reproduces B")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> entry(-4, 4);
    int checked = 0;
    while (checked < 200) {
        IntMatrix B(2, 4);
        for (Index i = 0; i < 2; ++i) {
            for (Index j = 0; j < 4; ++j) {
                B(i, j) = entry(rng);
            }
        }
        const IndexSet sigma = {static_cast<Index>(rng() % 2), static_cast<Index>(2 + rng() % 2)};
        ReducedProblem rp;
        try {
            rp = reduce_problem(B, sigma);
        } catch (const Error &) {
            continue; // singular simplex or proper sublattice
        }
        const RatMatrix back = to_rational(B.select_columns(sigma)) * rp.A;
        for (Index j = 0; j < 4; ++j) {
            const Index orig = rp.column_order[j];
            for (Index i = 0; i < 2; ++i) {
                REQUIRE(back(i, j) == Rat(B(i, orig)));
            }
        }
        for (Index i = 0; i < 2; ++i) {
            for (Index j = 0; j < 4; ++j) {
                REQUIRE((Rat(rp.q[i]) * rp.A(i, j)).denominator() == 1);
            }
        }
        ++checked;
    }
}

TEST_CASE("Smith and Hermite forms")
{
    const IntMatrix M = IntMatrix::from_rows({{2, 1}, {0, 2}});
    const SmithForm s = smith_normal_form(M);
    CHECK(int_product(int_product(s.U, M), s.V) == s.D);
    CHECK(s.invariant_factors == IntVec{1, 4});

    const IntMatrix M2 = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    const SmithForm s2 = smith_normal_form(M2);
    CHECK(int_product(int_product(s2.U, M2), s2.V) == s2.D);
    CHECK(s2.invariant_factors == IntVec{2, 6, 12});

    const IntMatrix h = hermite_normal_form(IntMatrix::from_rows({{2, 1, 1, 2}, {0, 2, 1, 2}}));
    CHECK(h == IntMatrix::identity(2));
    const IntMatrix h2 = hermite_normal_form(IntMatrix::from_rows({{2, 0}, {1, 2}}));
    CHECK(h2(0, 1) == 0);
    CHECK(h2(0, 0) * h2(1, 1) == 4);
    CHECK(in_column_lattice({2, 1}, IntMatrix::from_rows({{2, 0}, {1, 2}})));
    CHECK_FALSE(in_column_lattice({1, 0}, IntMatrix::from_rows({{2, 0}, {1, 2}})));
}

TEST_CASE("coset_representatives")
{
    CHECK(coset_representatives(IntMatrix::identity(2)) == std::vector<IntVec>{{0, 0}});
    CHECK(coset_representatives(IntMatrix::from_rows({{2}})) == std::vector<IntVec>{{0}, {1}});

    const IntMatrix M = IntMatrix::from_rows({{2, 1}, {0, 2}});
    const auto reps = coset_representatives(M);
    REQUIRE(reps.size() == 4);
    std::set<RatVec> classes;
    for (const auto &p : reps) {
        classes.insert(dual_class(M, p));
    }
    CHECK(classes.size() == 4);
    CHECK(std::is_sorted(reps.begin(), reps.end()));
}

TEST_CASE("property: coset representatives of random 2x2 matrices are a transversal")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> entry(-5, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const IntMatrix M = IntMatrix::from_rows({{entry(rng), entry(rng)}, {entry(rng), entry(rng)}});
        const std::int64_t det = std::llabs(M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0));
        if (det == 0) {
            continue;
        }
        const auto reps = coset_representatives(M);
        REQUIRE(static_cast<std::int64_t>(reps.size()) == det);
        std::set<RatVec> classes;
        for (const auto &p : reps) {
            classes.insert(dual_class(M, p));
        }
        REQUIRE(static_cast<std::int64_t>(classes.size()) == det);
    }
}

TEST_CASE("omega_set")
{
    CHECK(omega_set(RatMatrix::from_rows({{Rat(2)}}), 1) == std::vector<MultiIndex>{{0}});
    CHECK(omega_set(RatMatrix::from_rows({{Rat(3, 2)}}), 2) == std::vector<MultiIndex>{{0}, {1}});

    // Graded order: (0,1) reaches the coset of (2,0) first.
    const RatMatrix As = RatMatrix::from_rows({{Rat(1, 4), Rat(1, 2)}, {Rat(1, 2), Rat(1)}});
    const auto omega = omega_set(As, 4);
    CHECK(omega == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    std::set<RatVec> seen;
    for (const auto &k : omega) {
        seen.insert(fractional_part(apply(As, k)));
    }
    CHECK(seen.size() == 4);
    // Any further k collides.
    for (std::int64_t a = 0; a < 6; ++a) {
        for (std::int64_t b = 0; b < 6; ++b) {
            CHECK(seen.count(fractional_part(apply(As, {a, b}))) == 1);
        }
    }
    CHECK_THROWS_AS(omega_set(As, 5, 64), Error);
}

TEST_CASE("lambda_membership")
{
    const RatMatrix e2 = RatMatrix::from_rows({{Rat(3, 2)}});
    CHECK(lambda_membership({0}, {0}, e2));
    CHECK(lambda_membership({0}, {2}, e2));
    CHECK_FALSE(lambda_membership({0}, {1}, e2));
    const RatMatrix As = RatMatrix::from_rows({{Rat(1, 4), Rat(1, 2)}, {Rat(1, 2), Rat(1)}});
    CHECK(lambda_membership({0, 0}, {2, 1}, As));
    // Only integrality of A_σ̄m is tested; nonnegativity of k + m is up to the caller.
    CHECK(lambda_membership({0, 1}, {2, -1}, As));
    CHECK(lambda_membership({0, 1}, {0, -2}, As));
    CHECK_FALSE(lambda_membership({0, 1}, {1, 0}, As));
}

TEST_CASE("property: Lambda_k supports partition N^(n-d)")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> entry(-3, 3);
    int done = 0;
    while (done < 40) {
        const IntMatrix B = IntMatrix::from_rows(
            {{entry(rng), entry(rng), entry(rng), entry(rng)}, {entry(rng), entry(rng), entry(rng), entry(rng)}});
        ReducedProblem rp;
        try {
            rp = reduce_problem(B, {0, 1});
        } catch (const Error &) {
            continue;
        }
        const RatMatrix As = rp.A_sigma_bar();
        const auto omega = omega_set(As, rp.lattice_index);
        for (std::int64_t a = 0; a <= 5; ++a) {
            for (std::int64_t b = 0; a + b <= 5; ++b) {
                int owners = 0;
                for (const auto &k : omega) {
                    owners += lambda_membership(k, {a - k[0], b - k[1]}, As) ? 1 : 0;
                }
                REQUIRE(owners == 1);
            }
        }
        ++done;
    }
}

TEST_CASE("basis_data on the 2x4 flagship")
{
    const ReducedProblem rp = reduce_problem(IntMatrix::from_rows({{2, 1, 1, 2}, {0, 2, 1, 2}}), {0, 1});
    const BasisData bd = basis_data(rp);
    CHECK(bd.omega.size() == 4);
    CHECK(bd.coset_reps.size() == 4);
    CHECK(bd.invariant_factors == IntVec{1, 4});
}
