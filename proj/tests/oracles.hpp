#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature or Gamma code.

#include <cmath>
#include <complex>
#include <functional>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

using Complex = std::complex<double>;

// High-precision values computed offline with mpmath (30 digits).
inline constexpr double kIntHalf = 1.36842685573550875899;      // ∫ r^{-1/2} e^{-r-r²} dr
inline constexpr double kIntThreeHalves = 0.320157090360146488; // ∫ r^{1/2} e^{-r-r²} dr
inline constexpr double kContinuedE1 = 4.01748207291160346990;  // Im F(1/2) on B=(1,2), y=-1
inline const Complex kLogGamma1PlusI{-0.650923199301856, -0.301640320467533};
inline const Complex kLogGammaM55P3I{-12.5293299986887, -13.3549066353244};
inline const Complex kLogGamma03M27I{-3.51987838524276132, 0.324307209106458823};
inline const Complex kLogGamma125P05I{18.7239398604671958, 1.24274217654150569};
// F(−1/2) for A=(1,3/2), y=−1, δ=1/3, p=0.
inline const Complex kE2F{-0.400276058296022505, 1.38810826696878109};

// ∫_0^∞ f, real and imaginary parts separately.
inline Complex half_line(const std::function<Complex(double)> &f, double tol = 1e-13)
{
    boost::math::quadrature::exp_sinh<double> es;
    const double re = es.integrate([&](double r) { return f(r).real(); }, tol);
    const double im = es.integrate([&](double r) { return f(r).imag(); }, tol);
    return {re, im};
}

inline Complex interval(const std::function<Complex(double)> &f, double a, double b)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = GK::integrate([&](double t) { return f(t).real(); }, a, b, 15, 1e-13);
    const double im = GK::integrate([&](double t) { return f(t).imag(); }, a, b, 15, 1e-13);
    return {re, im};
}

inline Complex finite(const std::function<Complex(double)> &f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    const double re = ts.integrate([&](double t) { return f(t).real(); }, a, b, 1e-13);
    const double im = ts.integrate([&](double t) { return f(t).imag(); }, a, b, 1e-13);
    return {re, im};
}

// ∫_0^∞∫_0^∞ f(r1, r2), nested exp_sinh with the complex inner value cached
// per outer node.
inline Complex quarter_plane(const std::function<Complex(double, double)> &f, double tol = 1e-11)
{
    boost::math::quadrature::exp_sinh<double> outer;
    auto inner = [&](double r1) { return half_line([&](double r2) { return f(r1, r2); }, tol); };
    const double re = outer.integrate([&](double r1) { return inner(r1).real(); }, tol);
    const double im = outer.integrate([&](double r1) { return inner(r1).imag(); }, tol);
    return {re, im};
}

inline double rel(Complex got, Complex want)
{
    return std::abs(got - want) / std::abs(want);
}

} // namespace oracle
