#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "gkz/rational.hpp"

namespace gkz {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Principal branch, continuous on ℂ∖(−∞,0]. Throws PoleAtNonpositiveInteger.
Complex log_gamma(Complex z);
Complex gamma(Complex z);

// e^{iπh}, exact at multiples of 1/2 when h has no floating part.
Complex exp_i_pi(const HybridReal &h);
Complex exp_i_pi(double h);

struct QuadratureConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_levels = 12;
    int min_levels = 3;
    // Truncation: drop the part of the line where the integrand is below
    // truncation_factor·max(abs_tol, rel_tol·peak).
    double truncation_factor = 1e-2;
    double scan_min = -10.0; // coarse scan range in the stretched variable
    double scan_max = 40.0;
};

// GKZ_ASYM_MAX_LEVELS overrides max_levels when set.
QuadratureConfig with_environment(QuadratureConfig base);

struct QuadResult {
    Complex value{};
    double error = 0.0;
    int levels = 0;
    std::size_t evaluations = 0;
};

using LineIntegrand = std::function<Complex(double)>;

// ∫_ℝ g(v) dv where g(v) = O(e^{(α+1)v}) as v → −∞ and g decays at least
// like exp(−c·e^v) as v → +∞ (the log-radial picture of ∫_0^∞ r^α e^{−cr}).
// Uses v = s − e^{−s} and trapezoid refinement by halving the step.
QuadResult quad_line(const LineIntegrand &g, double alpha, const QuadratureConfig &cfg);

// ∫_0^∞ f(r) dr for f(r) ~ r^α at 0, α > −1.
QuadResult quad_halfline(const std::function<Complex(double)> &f, double alpha,
                         const QuadratureConfig &cfg);
// ∫_a^∞ f(r) dr, a > 0, f smooth on [a, ∞).
QuadResult quad_tail(const std::function<Complex(double)> &f, double a, const QuadratureConfig &cfg);
// ∫_{v0}^∞ g(v) dv for g in log-radial form as in quad_line.
QuadResult quad_tail_log(const LineIntegrand &g, double v0, const QuadratureConfig &cfg);
// ∫_a^b f(x) dx by composite Gauss–Legendre with panel doubling.
QuadResult quad_interval(const std::function<Complex(double)> &f, double a, double b,
                         const QuadratureConfig &cfg);

// Integrands that are themselves quadratures; their error estimates are
// integrated along with the values.
using NestedIntegrand = std::function<QuadResult(double)>;
QuadResult quad_line_nested(const NestedIntegrand &g, double alpha, const QuadratureConfig &cfg);
QuadResult quad_tail_log_nested(const NestedIntegrand &g, double v0, const QuadratureConfig &cfg);
QuadResult quad_interval_nested(const NestedIntegrand &f, double a, double b, const QuadratureConfig &cfg);

using MultiIntegrand = std::function<Complex(const std::vector<double> &)>;

// ∫_{ℝ^d} g(v) dv over log-radial coordinates, iterated quad_line with the
// last axis innermost.
QuadResult quad_product_log(const MultiIntegrand &g, const std::vector<double> &alphas,
                            const QuadratureConfig &cfg);
// ∫_{ℝ>0^d} f(r) dr.
QuadResult quad_product(const MultiIntegrand &f, const std::vector<double> &alphas,
                        const QuadratureConfig &cfg);

} // namespace gkz
