#include "gkz/numerics.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "gkz/error.hpp"

namespace gkz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Godfrey's coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

Complex log_gamma_right(Complex z)
{
    const Complex zm = z - 1.0;
    Complex x = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) {
        x += kLanczos[k] / (zm + static_cast<double>(k));
    }
    const Complex t = zm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(πz) on the branch that makes the reflection formula continuous
// across the real axis.
Complex log_sin_pi(Complex z)
{
    if (z.imag() < 0.0) {
        return std::conj(log_sin_pi(std::conj(z)));
    }
    const Complex i(0.0, 1.0);
    const Complex e = std::exp(2.0 * kPi * i * z);
    // log1p for complex arguments: log(1 + w) with w = −e, |w| ≤ 1.
    const Complex w = -e;
    const Complex l1p = std::abs(w) < 1e-8 ? w - 0.5 * w * w : std::log(1.0 + w);
    return -i * kPi * z + l1p + i * (kPi / 2.0) - std::log(2.0);
}

bool is_nonpositive_integer(Complex z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::nearbyint(z.real());
}

} // namespace

Complex log_gamma(Complex z)
{
    if (is_nonpositive_integer(z)) {
        throw Error(ErrorKind::PoleAtNonpositiveInteger, "Gamma has a pole at " + std::to_string(z.real()));
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::InvalidArgument, "log_gamma of a non-finite argument");
    }
    if (z.real() < 0.5) {
        return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
    }
    return log_gamma_right(z);
}

Complex gamma(Complex z)
{
    return std::exp(log_gamma(z));
}

Complex exp_i_pi(const HybridReal &h)
{
    const Rat r = mod(h.exact, Rat(2));
    if (h.rest == 0.0) {
        if (r == Rat(0)) {
            return {1.0, 0.0};
        }
        if (r == Rat(1, 2)) {
            return {0.0, 1.0};
        }
        if (r == Rat(1)) {
            return {-1.0, 0.0};
        }
        if (r == Rat(3, 2)) {
            return {0.0, -1.0};
        }
    }
    return exp_i_pi(to_double(r) + std::remainder(h.rest, 2.0));
}

Complex exp_i_pi(double h)
{
    const double x = std::remainder(h, 2.0);
    return {std::cos(kPi * x), std::sin(kPi * x)};
}

QuadratureConfig with_environment(QuadratureConfig base)
{
    if (const char *env = std::getenv("GKZ_ASYM_MAX_LEVELS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 6 || v > 30) {
            throw Error(ErrorKind::InvalidArgument,
                        std::string("GKZ_ASYM_MAX_LEVELS must be an integer in [6, 30], got '") + env + "'");
        }
        base.max_levels = static_cast<int>(v);
    }
    return base;
}

namespace {

void check_config(const QuadratureConfig &cfg)
{
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_levels < 1 || cfg.min_levels < 1) {
        throw Error(ErrorKind::InvalidArgument, "quadrature tolerances must be positive");
    }
}

bool finite(Complex c)
{
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

// Stretched variable: v = s − e^{−s}, dv/ds = 1 + e^{−s}. Integrable
// algebraic decay e^{(α+1)v} at v → −∞ becomes double-exponential in s.
struct Stretch {
    static double v(double s) { return s - std::exp(-s); }
    static double jac(double s) { return 1.0 + std::exp(-s); }
};

QuadResult line_core(const NestedIntegrand &g, double alpha, const QuadratureConfig &cfg)
{
    check_config(cfg);
    if (!(alpha > -1.0)) {
        throw Error(ErrorKind::EndpointSingularity, "endpoint exponent alpha = " + std::to_string(alpha) + " <= -1");
    }
    const double h0 = 0.5;
    const long j_lo = static_cast<long>(std::floor(cfg.scan_min / h0));
    const long j_hi = static_cast<long>(std::ceil(cfg.scan_max / h0));

    QuadResult out;
    std::vector<Complex> coarse;
    std::vector<double> coarse_err;
    coarse.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
    double peak = 0.0;
    for (long j = j_lo; j <= j_hi; ++j) {
        const double s = h0 * static_cast<double>(j);
        const QuadResult r = g(Stretch::v(s));
        const Complex val = r.value * Stretch::jac(s);
        if (!finite(val)) {
            throw Error(ErrorKind::NoConvergence, "non-finite integrand at v = " + std::to_string(Stretch::v(s)));
        }
        coarse.push_back(val);
        coarse_err.push_back(r.error * Stretch::jac(s));
        peak = std::max(peak, std::abs(val));
        ++out.evaluations;
    }
    if (peak == 0.0) {
        out.levels = 1;
        return out;
    }
    const double threshold = cfg.truncation_factor * std::max(cfg.abs_tol, cfg.rel_tol * peak);
    std::size_t first = coarse.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        if (std::abs(coarse[i]) >= threshold) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == coarse.size()) {
        // Everything is below the absolute floor.
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            out.value += h0 * coarse[i];
            out.error += h0 * (std::abs(coarse[i]) + coarse_err[i]);
        }
        out.levels = 1;
        return out;
    }
    if (first == 0) {
        throw Error(ErrorKind::NoConvergence, "integrand not negligible at the left end of the scan range");
    }
    if (last + 1 >= coarse.size()) {
        throw Error(ErrorKind::NoConvergence, "integrand not negligible at the right end of the scan range");
    }
    const std::size_t i0 = first - 1;
    const std::size_t i1 = last + 1;
    const double s0 = h0 * static_cast<double>(j_lo + static_cast<long>(i0));
    const double tail = 0.5 * h0 * (std::abs(coarse[i0]) + std::abs(coarse[i1]));

    Complex sum{};
    double l1 = 0.0;
    double err_sum = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) {
        sum += coarse[i];
        l1 += std::abs(coarse[i]);
        err_sum += coarse_err[i];
    }
    double h = h0;
    Complex T = h * sum;
    const std::size_t intervals0 = i1 - i0;
    for (int level = 1; level <= cfg.max_levels; ++level) {
        h *= 0.5;
        const std::size_t intervals = intervals0 << (level - 1);
        Complex fresh{};
        for (std::size_t k = 0; k < intervals; ++k) {
            const double s = s0 + h * static_cast<double>(2 * k + 1);
            const QuadResult r = g(Stretch::v(s));
            const Complex val = r.value * Stretch::jac(s);
            if (!finite(val)) {
                throw Error(ErrorKind::NoConvergence, "non-finite integrand at v = " + std::to_string(Stretch::v(s)));
            }
            fresh += val;
            l1 += std::abs(val);
            err_sum += r.error * Stretch::jac(s);
            ++out.evaluations;
        }
        sum += fresh;
        const Complex T_new = h * sum;
        const double delta = std::abs(T_new - T);
        T = T_new;
        if (level + 1 >= cfg.min_levels && delta <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(T))) {
            out.value = T;
            out.levels = level + 1;
            out.error = delta + tail + 10.0 * kEps * h * l1 + h * err_sum;
            return out;
        }
    }
    throw Error(ErrorKind::NoConvergence,
                "trapezoid refinement did not converge in " + std::to_string(cfg.max_levels) + " levels");
}

QuadResult plain(Complex v)
{
    QuadResult r;
    r.value = v;
    return r;
}

constexpr int kGaussPoints = 20;
using GaussRule = boost::math::quadrature::gauss<double, kGaussPoints>;

QuadResult interval_core(const NestedIntegrand &f, double a, double b, const QuadratureConfig &cfg)
{
    check_config(cfg);
    if (!(b > a)) {
        if (a == b) {
            return {};
        }
        throw Error(ErrorKind::InvalidArgument, "quad_interval needs a < b");
    }
    const auto &x = GaussRule::abscissa();
    const auto &w = GaussRule::weights();
    QuadResult out;
    Complex previous{};
    for (int level = 0; level <= cfg.max_levels; ++level) {
        const std::size_t panels = std::size_t{1} << level;
        const double width = (b - a) / static_cast<double>(panels);
        const double hw = 0.5 * width;
        Complex total{};
        double l1 = 0.0;
        double err = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double c = a + width * (static_cast<double>(p) + 0.5);
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const QuadResult r = f(c + sgn * hw * x[i]);
                    if (!finite(r.value)) {
                        throw Error(ErrorKind::NoConvergence, "non-finite integrand on a compact interval");
                    }
                    total += w[i] * hw * r.value;
                    l1 += w[i] * hw * std::abs(r.value);
                    err += w[i] * hw * r.error;
                    ++out.evaluations;
                }
            }
        }
        if (level >= 1) {
            const double delta = std::abs(total - previous);
            if (delta <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
                out.value = total;
                out.levels = level + 1;
                out.error = delta + 10.0 * kEps * l1 + err;
                return out;
            }
        }
        previous = total;
    }
    throw Error(ErrorKind::NoConvergence,
                "Gauss-Legendre panel doubling did not converge in " + std::to_string(cfg.max_levels) + " levels");
}

double softplus(double t)
{
    return t > 30.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t)
{
    return 1.0 / (1.0 + std::exp(-t));
}

} // namespace

QuadResult quad_line_nested(const NestedIntegrand &g, double alpha, const QuadratureConfig &cfg)
{
    return line_core(g, alpha, cfg);
}

QuadResult quad_tail_log_nested(const NestedIntegrand &g, double v0, const QuadratureConfig &cfg)
{
    return line_core(
        [&](double t) {
            QuadResult r = g(v0 + softplus(t));
            const double s = sigmoid(t);
            r.value *= s;
            r.error *= s;
            return r;
        },
        0.0, cfg);
}

QuadResult quad_interval_nested(const NestedIntegrand &f, double a, double b, const QuadratureConfig &cfg)
{
    return interval_core(f, a, b, cfg);
}

QuadResult quad_line(const LineIntegrand &g, double alpha, const QuadratureConfig &cfg)
{
    return line_core([&](double v) { return plain(g(v)); }, alpha, cfg);
}

QuadResult quad_halfline(const std::function<Complex(double)> &f, double alpha, const QuadratureConfig &cfg)
{
    // Keep r = e^v out of the subnormal range, where r^α overflows; s = −6.5
    // maps to v ≈ −672.
    QuadratureConfig local = cfg;
    local.scan_min = std::max(cfg.scan_min, -6.5);
    return line_core(
        [&](double v) {
            const double r = std::exp(v);
            return plain(r == 0.0 ? Complex{} : f(r) * r);
        },
        alpha, local);
}

QuadResult quad_tail(const std::function<Complex(double)> &f, double a, const QuadratureConfig &cfg)
{
    if (!(a > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "quad_tail needs a > 0");
    }
    return line_core(
        [&](double t) {
            const double e = std::exp(t);
            return plain(e == 0.0 ? Complex{} : f(a + e) * e);
        },
        0.0, cfg);
}

QuadResult quad_tail_log(const LineIntegrand &g, double v0, const QuadratureConfig &cfg)
{
    return quad_tail_log_nested([&](double v) { return plain(g(v)); }, v0, cfg);
}

QuadResult quad_interval(const std::function<Complex(double)> &f, double a, double b,
                         const QuadratureConfig &cfg)
{
    return interval_core([&](double x) { return plain(f(x)); }, a, b, cfg);
}

namespace {

QuadResult product_axis(const MultiIntegrand &g, const std::vector<double> &alphas, std::vector<double> &point,
                        std::size_t axis, const QuadratureConfig &cfg)
{
    if (axis == point.size()) {
        return plain(g(point));
    }
    try {
        return line_core(
            [&](double v) {
                point[axis] = v;
                return product_axis(g, alphas, point, axis + 1, cfg);
            },
            alphas[axis], cfg);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::EndpointSingularity) {
            const std::string what = e.what();
            if (what.find("[axis ") == std::string::npos) {
                throw Error(e.kind(), "[axis " + std::to_string(axis + 1) + "] " +
                                          what.substr(what.find(": ") + 2));
            }
        }
        throw;
    }
}

} // namespace

QuadResult quad_product_log(const MultiIntegrand &g, const std::vector<double> &alphas, const QuadratureConfig &cfg)
{
    if (alphas.empty() || alphas.size() > 3) {
        throw Error(ErrorKind::UnsupportedDimension, "quad_product supports 1 <= d <= 3");
    }
    std::vector<double> point(alphas.size(), 0.0);
    return product_axis(g, alphas, point, 0, cfg);
}

QuadResult quad_product(const MultiIntegrand &f, const std::vector<double> &alphas, const QuadratureConfig &cfg)
{
    std::vector<double> r(alphas.size());
    return quad_product_log(
        [&](const std::vector<double> &v) {
            double jac = 1.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                r[k] = std::exp(v[k]);
                jac *= r[k];
            }
            return jac == 0.0 ? Complex{} : f(r) * jac;
        },
        alphas, cfg);
}

} // namespace gkz
