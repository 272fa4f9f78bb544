#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkz/cycles.hpp"
#include "gkz/geometry.hpp"
#include "gkz/lattice.hpp"
#include "gkz/numerics.hpp"

namespace gkz {

// Integral over the cycle in t-space before the toric change of variables.
struct ToricProblem {
    IntMatrix B;
    IndexSet sigma;
    CVec gamma;
    std::vector<Polar> x; // length n; arguments of x_σ are taken as given
};

enum class ConvergenceMode { Certified, Extended };
enum class PivotRule { MaxRealPart, LowestIndex };

struct SolverConfig {
    QuadratureConfig quad;
    ConvergenceMode mode = ConvergenceMode::Certified;
    // Power series in y′: stop after three consecutive total-degree layers
    // below max(abs, rel·|sum|).
    double series_abs_tol = 1e-18;
    double series_rel_tol = 1e-17;
    int series_max_degree = 400;
    std::size_t recursion_budget = 4096;
    double pole_tol = 1e-9;
    PivotRule pivot = PivotRule::MaxRealPart;
    // Keep applying the recurrence until every Re β_k < −margin.
    double continuation_margin = 0.0;
    // Largest numerator q_k·β_k explored when testing membership in 𝒫.
    std::int64_t pole_enumeration_bound = 1 << 20;
};

struct ConvergenceReport {
    bool ok = false;
    ConvergenceMode mode = ConvergenceMode::Certified;
    std::vector<std::pair<Index, bool>> conditions; // 0-based reduced columns
    // Extended mode only: Σ K_j over τ∖(η∪σ) and cos ϑ.
    double smallness = 0.0;
    double cos_theta = 0.0;
};

// Sufficient convergence conditions evaluated on the columns whose y is
// nonzero. d > 3 in certified mode falls back to every column.
ConvergenceReport check_convergence(const ReducedProblem &rp, const CycleSpec &spec, const std::vector<Polar> &y,
                                    ConvergenceMode mode);

struct EvalResult {
    Complex value{};
    double error_estimate = 0.0;
    std::vector<std::pair<Index, bool>> conditions_checked;
    Complex phase{1.0, 0.0}; // e^{−iπ⟨1+2p+δ,β⟩}
    CVec twists;             // e^{iπ⟨1+2p+δ,a(j)⟩}, j ∉ σ
    std::string status;
    std::size_t evaluations = 0;
};

// Quadrature in log-radial coordinates; requires Re β < 0.
EvalResult eval_F(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta, const std::vector<Polar> &y,
                  const SolverConfig &cfg);

// e^{iπ⟨2p+1, −β⟩}∏Γ(−β_k).
Complex eval_A0(const IntVec &p, const CVec &beta);
// Same, for β − shift with the shift exact (phase kept exact).
Complex eval_A0_shifted(const IntVec &p, const CVec &beta, const RatVec &shift);

// Coefficient of y_n^m/m! in the expansion of F: the entire series in
// y′ = (y_{d+1}, …, y_{n−1}) at β − m·a(n). trunc > 0 caps the total degree.
Complex eval_A_coeff(const ReducedProblem &rp, const IntVec &p, const CVec &beta, std::int64_t m,
                     const CVec &y_prime, int trunc, const SolverConfig &cfg);

enum class SeriesKind { AsymptoticInYn, GevreySk };

struct SeriesTable {
    SeriesKind kind = SeriesKind::AsymptoticInYn;
    std::vector<MultiIndex> support;
    std::map<MultiIndex, Complex> coefficients;
    Rat gevrey_index;
    MultiIndex k_label; // S_k tables only
};

struct ExpansionReport {
    SeriesTable table; // A(β;m,y′)/m! for m < N
    std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
    std::vector<double> remainders;
    std::vector<double> remainder_errors; // quadrature error of each F value
    double slope = 0.0;
};

ExpansionReport expansion_report(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                                 const std::vector<Polar> &y, int N, const SolverConfig &cfg);

// S_k coefficient of y^{k+m}/(k+m)!: e^{iπ|A_σ̄(k+m)|}Γ(−β + A_σ̄(k+m)).
// m may have negative entries as long as k + m ≥ 0.
Complex gevrey_coefficient(const MultiIndex &k, const MultiIndex &m, const CVec &beta, const RatMatrix &A_sigma_bar);

// S_k restricted to total degree ≤ order.
SeriesTable gevrey_table(const MultiIndex &k, const CVec &beta, const RatMatrix &A_sigma_bar, int order);
// Coefficients A⁰_p(β − A_σ̄μ) of y^μ/μ! for |μ| ≤ order.
SeriesTable asymptotic_table(const ReducedProblem &rp, const IntVec &p, const CVec &beta, int order);

struct ConnectionResult {
    std::vector<MultiIndex> omega;  // columns
    std::vector<IntVec> reps;       // rows
    std::vector<std::vector<Rat>> exponent; // ⟨2p, A_σ̄k⟩ mod 2, units of π
    std::vector<CVec> matrix;       // matrix[p][k] = e^{iπ·exponent}
    Complex determinant{};
};

ConnectionResult connection_solve(const BasisData &basis, const RatMatrix &A_sigma_bar);

// Coefficient of y^μ/μ! in F_p reconstructed from Σ_k M_{p,k}S_k: the only
// k contributing is the one whose coset contains μ.
Complex reconstruct_coefficient(const ConnectionResult &conn, Index p_row, const MultiIndex &mu, const CVec &beta,
                                const RatMatrix &A_sigma_bar);

// Meromorphic continuation through the contiguity relation.
EvalResult continue_F(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                      const std::vector<Polar> &y, const SolverConfig &cfg);

struct ResidualReport {
    std::vector<double> contiguity; // per k ∈ σ
    std::vector<double> derivative; // per ℓ ∉ σ with y_ℓ ≠ 0 (NaN otherwise)
    std::vector<double> steps;
    Complex value{};
};

ResidualReport residual_suite(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                              const std::vector<Polar> &y, const SolverConfig &cfg);

struct PoleInfo {
    bool in_P = false;
    bool resonant = false;
};

PoleInfo pole_and_resonance(const CVec &beta, const ReducedProblem &rp, const SolverConfig &cfg = {});

struct HankelReport {
    EvalResult h;          // ∫ over Υ(ε)
    Complex hankel_factor; // ∏(e^{2πi q_kβ_k} − 1)
    Complex lhs{};         // e^{−iπ⟨1+2p+δ,β⟩}·H
    std::optional<Complex> rhs; // hankel_factor·F̃ when β ∉ 𝒫
    double relative_gap = 0.0;
};

HankelReport eval_H_upsilon(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                            const std::vector<Polar> &y, double epsilon, const SolverConfig &cfg);

struct ReducedInputs {
    ReducedProblem rp;
    CVec beta;
    std::vector<Polar> y;
    Complex prefactor; // det(B_σ⁻¹)·x_σ^β
};

ReducedInputs reduce_inputs(const ToricProblem &tp);

// det(B_σ⁻¹)x_σ^β·F(β; y). With allow_continuation, Re β ≥ 0 goes through
// continue_F instead of failing.
EvalResult eval_I(const ToricProblem &tp, const CycleSpec &spec, const SolverConfig &cfg,
                  bool allow_continuation = false);

} // namespace gkz
