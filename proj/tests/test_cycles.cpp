#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gkz/cycles.hpp"
#include "gkz/error.hpp"
#include "oracles.hpp"

using namespace gkz;

namespace {

constexpr double kPi = std::numbers::pi;

HybridReal hr(std::int64_t num, std::int64_t den = 1)
{
    return HybridReal(Rat(num, den));
}

RatMatrix row(std::initializer_list<Rat> r)
{
    return RatMatrix::from_rows({std::vector<Rat>(r)});
}

// Γ(−β)-type integrand in log form: u^{−β}e^{−u} per coordinate.
LogIntegrand gamma_integrand(const CVec &beta)
{
    return [beta](const CVec &w) {
        Complex e{};
        for (Index k = 0; k < w.size(); ++k) {
            e -= beta[k] * w[k] + std::exp(w[k]);
        }
        return std::exp(e);
    };
}

Complex assemble(const UpsilonCycle &cycle, const LogIntegrand &G)
{
    Complex total{};
    for (const auto &piece : cycle.pieces) {
        total += quad_piece(cycle, piece, G, QuadratureConfig{}).value;
    }
    return total;
}

} // namespace

TEST_CASE("Polar keeps axis arguments exact")
{
    CHECK(Polar::from_complex({-2.0, 0.0}).arg_over_pi == hr(1));
    CHECK(Polar::from_complex({0.0, 3.0}).arg_over_pi == hr(1, 2));
    CHECK(Polar::from_complex({0.0, -3.0}).arg_over_pi == hr(-1, 2));
    const Polar p = Polar::from_complex({1.0, 1.0});
    CHECK(std::abs(p.arg_over_pi.value() - 0.25) < 1e-15);
    // A point on another sheet keeps its argument.
    const Polar far{2.0, hr(7, 3)};
    CHECK(std::abs(far.value() - std::polar(2.0, kPi / 3.0)) < 1e-14);
    CHECK(std::abs(far.log().imag() - 7.0 * kPi / 3.0) < 1e-14);
}

TEST_CASE("make_cycle_spec enforces |delta| < 1/2")
{
    CHECK_NOTHROW(make_cycle_spec({0}, {hr(2, 5)}));
    CHECK_THROWS_AS(make_cycle_spec({0}, {hr(1, 2)}), Error);
    CHECK_THROWS_AS(make_cycle_spec({0, 0}, {hr(0)}), Error);
}

TEST_CASE("phase and twist")
{
    const CycleSpec s = make_cycle_spec({0}, {hr(0)});
    CHECK(std::abs(phase_beta(s, {Complex(-0.5, 0.0)}) - Complex(0.0, 1.0)) < 1e-15);
    CHECK(twist(s, {Rat(2)}) == Complex(1.0, 0.0));
    const CycleSpec s2 = make_cycle_spec({1}, {hr(1, 3)});
    CHECK(pairing(s2, {Rat(3, 2)}) == hr(5));
}

TEST_CASE("solve_theta")
{
    CHECK(solve_theta(IntMatrix::identity(2), {0, 1}, {hr(0), hr(0)}, {0, 0}, {hr(0), hr(0)}) ==
          std::vector<HybridReal>{hr(1), hr(1)});
    CHECK(solve_theta(IntMatrix::from_rows({{2}}), {0}, {hr(0)}, {0}, {hr(0)}) == std::vector<HybridReal>{hr(1, 2)});
    // ᵗB_σ⁻¹·(3, 1) for B_σ = [[2,1],[0,2]].
    CHECK(solve_theta(IntMatrix::from_rows({{2, 1}, {0, 2}}), {0, 1}, {hr(0), hr(0)}, {1, 0}, {hr(0), hr(0)}) ==
          std::vector<HybridReal>{hr(3, 2), hr(-1, 4)});
}

TEST_CASE("property: solve_theta satisfies the argument equations and the projection criterion")
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_int_distribution<int> pd(-2, 2);
    std::uniform_real_distribution<double> ang(-1.0, 1.0);
    int done = 0;
    while (done < 200) {
        const IntMatrix B = IntMatrix::from_rows({{entry(rng), entry(rng)}, {entry(rng), entry(rng)}});
        const std::int64_t det = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
        if (det == 0) {
            continue;
        }
        const std::vector<HybridReal> args = {HybridReal::from_double(ang(rng)), hr(pd(rng), 3)};
        const std::vector<HybridReal> delta = {hr(pd(rng), 5), HybridReal::from_double(0.4 * ang(rng))};
        const IntVec p = {pd(rng), pd(rng)};
        const auto theta = solve_theta(B, {0, 1}, args, p, delta);
        for (Index k = 0; k < 2; ++k) {
            const double lhs = args[k].value() + static_cast<double>(B(0, k)) * theta[0].value() +
                               static_cast<double>(B(1, k)) * theta[1].value();
            REQUIRE(std::abs(lhs - (1.0 + delta[k].value() + 2.0 * static_cast<double>(p[k]))) < 1e-12);
        }
        // p′ = p + ᵗB_σ·m gives θ′ − θ = 2m.
        const IntVec m = {pd(rng), pd(rng)};
        const IntVec p2 = {p[0] + B(0, 0) * m[0] + B(1, 0) * m[1], p[1] + B(0, 1) * m[0] + B(1, 1) * m[1]};
        const auto theta2 = solve_theta(B, {0, 1}, args, p2, delta);
        for (Index k = 0; k < 2; ++k) {
            REQUIRE((theta2[k] - theta[k]).exact == Rat(2 * m[k]));
            REQUIRE(std::abs((theta2[k] - theta[k]).rest) < 1e-12);
        }
        ++done;
    }
}

TEST_CASE("choose_delta")
{
    CHECK(choose_delta({Rat(2)}, {0}, hr(1)) == std::vector<HybridReal>{hr(0)});
    // (3/2)(1 + δ) ≡ 1 mod 2 at arg y_n = 0.
    CHECK(choose_delta({Rat(3, 2)}, {0}, hr(0)) == std::vector<HybridReal>{hr(-1, 3)});
    CHECK(choose_delta({Rat(1, 2), Rat(1)}, {0, 0}, hr(1)) == std::vector<HybridReal>{hr(1, 3), hr(1, 3)});
    CHECK_THROWS_AS(choose_delta({Rat(1)}, {0}, hr(0)), Error);
}

TEST_CASE("property: choose_delta satisfies the condition at the anchoring argument")
{
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> num(1, 12);
    std::uniform_int_distribution<int> den(1, 6);
    std::uniform_int_distribution<int> pd(-2, 2);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    int done = 0;
    while (done < 500) {
        const Index d = 1 + rng() % 2;
        RatVec a(d);
        Rat norm(0);
        for (auto &ak : a) {
            ak = Rat(num(rng), den(rng));
            norm += ak;
        }
        if (norm <= Rat(1)) {
            continue;
        }
        IntVec p(d);
        for (auto &pk : p) {
            pk = pd(rng);
        }
        const HybridReal arg = (done % 2 == 0) ? HybridReal::from_double(ang(rng)) : hr(pd(rng) * 7 + 1, 6);
        const auto delta = choose_delta(a, p, arg);
        for (const auto &dk : delta) {
            REQUIRE(std::abs(dk.value()) < 0.5 - 1e-9);
        }
        RatMatrix A(d, d + 1);
        for (Index k = 0; k < d; ++k) {
            A(k, k) = Rat(1);
            A(k, d) = a[k];
        }
        REQUIRE(check_condition(d, A, {Polar{1.0, arg}}, p, delta));
        for (Index k = 0; k < d; ++k) {
            REQUIRE(check_condition(k, A, {Polar{1.0, arg}}, p, delta));
        }
        ++done;
    }
}

TEST_CASE("sector_of")
{
    const Sector s = sector_of({Rat(2)}, {0}, {hr(0)});
    CHECK(s.center == hr(1));
    CHECK(s.contains(hr(1)));
    CHECK(s.contains(hr(3, 5)));
    CHECK_FALSE(s.contains(hr(1, 2))); // open interval
    CHECK_FALSE(s.contains(hr(0)));
    CHECK(s.contains(hr(3))); // mod 2
    CHECK(sector_of({Rat(3, 2)}, {0}, {hr(-1, 3)}).center == hr(0));
}

TEST_CASE("property: sector_of and check_condition agree")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ang(-4.0, 4.0);
    const RatMatrix A = RatMatrix::from_rows({{Rat(1), Rat(0), Rat(1, 4), Rat(1, 2)}, {Rat(0), Rat(1), Rat(1, 2), Rat(1)}});
    const std::vector<HybridReal> delta = {hr(1, 5), hr(-1, 7)};
    const IntVec p = {1, 0};
    const Sector s = sector_of(A.column(3), p, delta);
    for (int i = 0; i < 2000; ++i) {
        const HybridReal arg = (i % 4 == 0) ? hr(static_cast<int>(ang(rng) * 6), 6) : HybridReal::from_double(ang(rng));
        REQUIRE(s.contains(arg) == check_condition(3, A, {Polar{0.5, hr(0)}, Polar{2.0, arg}}, p, delta));
    }
}

TEST_CASE("check_condition")
{
    const RatMatrix A = row({Rat(1), Rat(2)});
    CHECK(check_condition(0, A, {Polar{1.0, hr(1)}}, {0}, {hr(0)}));
    CHECK(check_condition(1, A, {Polar{1.0, hr(1)}}, {0}, {hr(0)}));
    CHECK_FALSE(check_condition(1, A, {Polar{1.0, hr(0)}}, {0}, {hr(0)}));
    CHECK_THROWS_AS(check_condition(1, A, {Polar{}}, {0}, {hr(0)}), Error);
    CHECK(in_theta(hr(1)));
    CHECK_FALSE(in_theta(hr(1, 2)));
    CHECK_FALSE(in_theta(hr(3, 2)));
    CHECK(in_theta(hr(-1)));
}

TEST_CASE("upsilon_strata shapes")
{
    const UpsilonCycle k1 = upsilon_strata(0.1, {Rat(3, 2)}, {1});
    CHECK(k1.pieces.size() == 3);
    const UpsilonCycle k2 = upsilon_strata(0.1, {Rat(3, 2)}, {2});
    CHECK(k2.pieces.size() == 3);
    CHECK(k2.q == IntVec{2});
    const UpsilonCycle c2 = upsilon_strata(0.2, {Rat(1, 2), Rat(1)}, {4, 2});
    REQUIRE(c2.pieces.size() == 9);
    int open = 0, edges = 0, torus = 0;
    for (const auto &pc : c2.pieces) {
        CHECK(pc.eta.size() + pc.tau.size() == 2);
        CHECK(pc.xi.size() == pc.tau.size());
        open += pc.eta.empty();
        edges += pc.eta.size() == 1;
        torus += pc.eta.size() == 2;
    }
    CHECK(open == 4);
    CHECK(edges == 4);
    CHECK(torus == 1);
    CHECK_THROWS_AS(upsilon_strata(0.0, {Rat(2)}, {1}), Error);
    CHECK_THROWS_AS(upsilon_strata(0.1, {Rat(2)}, {0}), Error);
}

TEST_CASE("property: boundary points belong to exactly one stratum")
{
    const UpsilonCycle c = upsilon_strata(0.3, {Rat(1, 2), Rat(1)}, {4, 2});
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> v(-6.0, 6.0);
    const double tol = 1e-9;
    auto strata_claiming = [&](const std::vector<double> &lr) {
        std::set<IndexSet> hits;
        for (const auto &pc : c.pieces) {
            if (in_radial_domain(c, pc, lr, tol)) {
                hits.insert(pc.eta);
            }
        }
        return hits;
    };
    for (int i = 0; i < 500; ++i) {
        // Interior point of {r^a > ε^{|a|}}.
        const std::vector<double> p = {v(rng), v(rng)};
        const double s = 0.5 * p[0] + p[1];
        if (std::abs(s - c.log_bound()) < 1e-3) {
            continue;
        }
        const auto hits = strata_claiming(p);
        if (s > c.log_bound()) {
            REQUIRE(hits == std::set<IndexSet>{IndexSet{}});
        } else {
            REQUIRE(hits.empty());
        }
        // A boundary point built from the curve: r_k = ρ(r_m), r_m > ρ.
        const Index k = i % 2;
        const Index m = 1 - k;
        const double vm = std::log(c.epsilon) + std::abs(v(rng)) + 1e-3;
        UpsilonPiece probe;
        probe.eta = {k};
        probe.tau = {m};
        probe.xi = {0};
        std::vector<double> b(2);
        b[m] = vm;
        b[k] = log_rho(c, probe, {vm});
        REQUIRE(strata_claiming(b) == std::set<IndexSet>{IndexSet{k}});
    }
    const std::vector<double> corner = {std::log(c.epsilon), std::log(c.epsilon)};
    CHECK(strata_claiming(corner) == std::set<IndexSet>{IndexSet{0, 1}});
}

TEST_CASE("quad_piece")
{
    const UpsilonCycle k1 = upsilon_strata(1.0, {Rat(1)}, {1});
    SUBCASE("zero integrand")
    {
        for (const auto &pc : k1.pieces) {
            CHECK(quad_piece(k1, pc, [](const CVec &) { return Complex{}; }, {}).value == Complex{});
        }
    }
    SUBCASE("circle piece against a direct parametric quadrature")
    {
        const CVec beta = {Complex(-0.5, 0.2)};
        const LogIntegrand G = gamma_integrand(beta);
        for (const auto &pc : k1.pieces) {
            if (pc.eta.empty()) {
                continue;
            }
            const Complex got = quad_piece(k1, pc, G, {}).value;
            const Complex want = oracle::interval(
                [&](double phi) { return Complex(0.0, -1.0) * G({Complex(0.0, -phi)}); }, 0.0, 2.0 * kPi);
            CHECK(oracle::rel(got, static_cast<double>(pc.sign) * want) < 1e-12);
        }
    }
}

TEST_CASE("keyhole assembly reproduces the Hankel factor times Gamma")
{
    for (const CVec beta : {CVec{Complex(-0.5, 0.0)}, CVec{Complex(0.7, 0.3)}, CVec{Complex(-1.3, -0.4)}}) {
        for (std::int64_t q : {1, 2}) {
            for (double eps : {0.1, 1.0}) {
                const UpsilonCycle c = upsilon_strata(eps, {Rat(3, 2)}, {q});
                const Complex got = assemble(c, gamma_integrand(beta));
                const Complex want = (std::exp(Complex(0.0, 2.0 * kPi * q) * beta[0]) - 1.0) * gamma(-beta[0]);
                // Scaled by |Γ(−β)| since the factor vanishes at qβ ∈ ℤ.
                CHECK(std::abs(got - want) < 1e-10 * std::abs(gamma(-beta[0])));
            }
        }
    }
}

TEST_CASE("two-dimensional cycle closes on a product integrand")
{
    const CVec beta = {Complex(-0.4, 0.1), Complex(0.3, 0.0)};
    for (const IntVec q : {IntVec{1, 1}, IntVec{4, 2}}) {
        for (double eps : {0.1, 0.3}) {
            const UpsilonCycle c = upsilon_strata(eps, {Rat(1, 2), Rat(1)}, q);
            const Complex got = assemble(c, gamma_integrand(beta));
            Complex want{1.0, 0.0};
            for (Index k = 0; k < 2; ++k) {
                want *= (std::exp(Complex(0.0, 2.0 * kPi * static_cast<double>(q[k])) * beta[k]) - 1.0) * gamma(-beta[k]);
            }
            CHECK(oracle::rel(got, want) < 1e-9);
        }
    }
}
