#pragma once

#include <functional>
#include <vector>

#include "gkz/lattice.hpp"
#include "gkz/numerics.hpp"
#include "gkz/rational.hpp"

namespace gkz {

// Point of the universal covering of ℂ*: modulus and argument in units of π.
struct Polar {
    double abs = 0.0;
    HybridReal arg_over_pi;

    // Principal argument; exact on the real and imaginary axes.
    static Polar from_complex(Complex c);
    Complex value() const;
    Complex log() const;
    bool is_zero() const noexcept { return abs == 0.0; }
};

// (p, δ) selecting the ray product with arguments (1 + 2p_k + δ_k)π.
struct CycleSpec {
    IntVec p;
    std::vector<HybridReal> delta;
    std::vector<HybridReal> theta_over_pi; // filled by solve_theta when B is known

    Index d() const noexcept { return p.size(); }
};

CycleSpec make_cycle_spec(IntVec p, std::vector<HybridReal> delta);

// ⟨1 + 2p + δ, a⟩.
HybridReal pairing(const CycleSpec &spec, const RatVec &a);
// e^{−iπ⟨1+2p+δ, β⟩}
Complex phase_beta(const CycleSpec &spec, const CVec &beta);
// e^{iπ⟨1+2p+δ, a⟩}
Complex twist(const CycleSpec &spec, const RatVec &a);

// θ/π = (ᵗB_σ)⁻¹(−arg x_σ/π + 1 + δ + 2p).
std::vector<HybridReal> solve_theta(const IntMatrix &B, const IndexSet &sigma,
                                    const std::vector<HybridReal> &arg_x_sigma_over_pi, const IntVec &p,
                                    const std::vector<HybridReal> &delta);

// Uniform δ centring arg y_n + ⟨1+δ+2p, a(n)⟩π on π modulo 2π, clamped to
// |δ_k| < 1/2 when the centring value is too large.
std::vector<HybridReal> choose_delta(const RatVec &a_n, const IntVec &p, const HybridReal &arg_yn_over_pi);

// Open interval of arg y_n (units of π) of width 1 around `center`, mod 2.
struct Sector {
    HybridReal center;
    bool contains(const HybridReal &arg_over_pi) const;
};

Sector sector_of(const RatVec &a_n, const IntVec &p, const std::vector<HybridReal> &delta);

// angle/π ∈ (1/2, 3/2) + 2ℤ, open.
bool in_theta(const HybridReal &angle_over_pi);

// Condition on arg(y_ℓ t^{a(ℓ)}) for the reduced column ℓ (0-based). `y`
// holds y_{d}, …, y_{n−1}; columns of the simplex use y = 1.
bool check_condition(Index ell, const RatMatrix &A, const std::vector<Polar> &y, const IntVec &p,
                     const std::vector<HybridReal> &delta);

// One piece of Υ(ε): coordinates in η run over circles of the common radius
// ρ fixed by r^a = ε^{|a|}; coordinates in τ are radial, on the ray of
// argument −2q_kξ_kπ (clockwise convention).
struct UpsilonPiece {
    IndexSet eta;
    IndexSet tau;
    std::vector<int> xi; // parallel to tau
    int sign = 1;
};

struct UpsilonCycle {
    double epsilon = 0.0;
    RatVec a; // exponent of the defining monomial, a(n)
    IntVec q;
    std::vector<UpsilonPiece> pieces;

    Index d() const noexcept { return q.size(); }
    double log_bound() const; // |a|·log ε
};

UpsilonCycle upsilon_strata(double epsilon, const RatVec &a_n, const IntVec &q);

// log ρ on the stratum of `piece` given log r_k for k ∈ τ (parallel to tau).
double log_rho(const UpsilonCycle &cycle, const UpsilonPiece &piece, const std::vector<double> &log_r_tau);
// Whether the radial point log_r (length d) lies in the projection of the
// stratum of `piece`: r_η = ρ and r_τ > ρ, or r^a > ε^{|a|} for η = ∅.
bool in_radial_domain(const UpsilonCycle &cycle, const UpsilonPiece &piece, const std::vector<double> &log_r,
                      double tol);

// ∫ over the piece of G(w) dw_1∧…∧dw_d in log coordinates w_k = log u_k;
// the orientation sign is applied. Supports d ≤ 2.
using LogIntegrand = std::function<Complex(const CVec &w)>;
QuadResult quad_piece(const UpsilonCycle &cycle, const UpsilonPiece &piece, const LogIntegrand &G,
                      const QuadratureConfig &cfg);

} // namespace gkz
