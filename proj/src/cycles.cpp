#include "gkz/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gkz/error.hpp"

namespace gkz {

namespace {

constexpr double kPi = std::numbers::pi;

// Representative in [0, 2).
HybridReal reduce_mod2(const HybridReal &h)
{
    if (h.is_exact()) {
        return {mod(h.exact, Rat(2))};
    }
    const double shift = 2.0 * std::floor(h.value() / 2.0);
    return {h.exact - Rat(static_cast<std::int64_t>(shift)), h.rest};
}

bool less(const HybridReal &a, const HybridReal &b)
{
    if (a.is_exact() && b.is_exact()) {
        return a.exact < b.exact;
    }
    return a.value() < b.value();
}

HybridReal pairing_raw(const IntVec &p, const std::vector<HybridReal> &delta, const RatVec &a, bool with_delta)
{
    if (p.size() != a.size() || (with_delta && delta.size() != a.size())) {
        throw Error(ErrorKind::InvalidArgument, "dimension mismatch between (p, delta) and the exponent vector");
    }
    HybridReal sum;
    for (Index k = 0; k < a.size(); ++k) {
        HybridReal c(Rat(1 + 2 * p[k]));
        if (with_delta) {
            c = c + delta[k];
        }
        sum = sum + a[k] * c;
    }
    return sum;
}

int permutation_sign(const IndexSet &perm)
{
    int sign = 1;
    for (Index i = 0; i < perm.size(); ++i) {
        for (Index j = i + 1; j < perm.size(); ++j) {
            if (perm[i] > perm[j]) {
                sign = -sign;
            }
        }
    }
    return sign;
}

} // namespace

Polar Polar::from_complex(Complex c)
{
    Polar out;
    out.abs = std::abs(c);
    if (c.imag() == 0.0) {
        out.arg_over_pi = HybridReal(Rat(c.real() < 0.0 ? 1 : 0));
    } else if (c.real() == 0.0) {
        out.arg_over_pi = HybridReal(Rat(c.imag() > 0.0 ? 1 : -1, 2));
    } else {
        out.arg_over_pi = HybridReal::from_double(std::arg(c) / kPi);
    }
    return out;
}

Complex Polar::value() const
{
    return abs * exp_i_pi(arg_over_pi);
}

Complex Polar::log() const
{
    if (abs == 0.0) {
        throw Error(ErrorKind::ZeroCoordinate, "logarithm of zero");
    }
    return {std::log(abs), kPi * arg_over_pi.value()};
}

CycleSpec make_cycle_spec(IntVec p, std::vector<HybridReal> delta)
{
    if (p.size() != delta.size()) {
        throw Error(ErrorKind::InvalidArgument, "p and delta must have the same length");
    }
    for (const auto &dk : delta) {
        if (!(std::abs(dk.value()) < 0.5)) {
            throw Error(ErrorKind::InvalidArgument, "|delta_k| must be < 1/2, got " + to_string(dk));
        }
    }
    CycleSpec spec;
    spec.p = std::move(p);
    spec.delta = std::move(delta);
    return spec;
}

HybridReal pairing(const CycleSpec &spec, const RatVec &a)
{
    return pairing_raw(spec.p, spec.delta, a, true);
}

Complex phase_beta(const CycleSpec &spec, const CVec &beta)
{
    if (beta.size() != spec.d()) {
        throw Error(ErrorKind::InvalidArgument, "beta has the wrong dimension");
    }
    Complex s{};
    for (Index k = 0; k < spec.d(); ++k) {
        const double c = 1.0 + 2.0 * static_cast<double>(spec.p[k]) + spec.delta[k].value();
        s += c * beta[k];
    }
    return std::exp(Complex(0.0, -kPi) * s);
}

Complex twist(const CycleSpec &spec, const RatVec &a)
{
    return exp_i_pi(pairing(spec, a));
}

std::vector<HybridReal> solve_theta(const IntMatrix &B, const IndexSet &sigma,
                                    const std::vector<HybridReal> &arg_x_sigma_over_pi, const IntVec &p,
                                    const std::vector<HybridReal> &delta)
{
    const Index d = B.rows();
    if (sigma.size() != d || arg_x_sigma_over_pi.size() != d || p.size() != d || delta.size() != d) {
        throw Error(ErrorKind::InvalidArgument, "solve_theta: dimension mismatch");
    }
    const RatMatrix T = inverse(to_rational(B.select_columns(sigma)).transpose());
    std::vector<HybridReal> rhs(d);
    for (Index k = 0; k < d; ++k) {
        rhs[k] = HybridReal(Rat(1 + 2 * p[k])) + delta[k] - arg_x_sigma_over_pi[k];
    }
    std::vector<HybridReal> theta(d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            theta[i] = theta[i] + T(i, j) * rhs[j];
        }
    }
    return theta;
}

std::vector<HybridReal> choose_delta(const RatVec &a_n, const IntVec &p, const HybridReal &arg_yn_over_pi)
{
    Rat norm(0);
    for (const auto &ak : a_n) {
        norm += ak;
    }
    if (norm <= Rat(1)) {
        throw Error(ErrorKind::NoAdmissibleDelta, "|a(n)| = " + to_string(norm) + " <= 1");
    }
    const HybridReal base = HybridReal(Rat(1)) - arg_yn_over_pi - pairing_raw(p, {}, a_n, false);
    // Representative in (−1, 1].
    HybridReal c = base;
    if (base.is_exact()) {
        const Rat k = -Rat(floor(-(base.exact - Rat(1)) / Rat(2)));
        c = HybridReal(base.exact - Rat(2) * k);
    } else {
        const double k = std::ceil((base.value() - 1.0) / 2.0);
        c = base - HybridReal(Rat(2 * static_cast<std::int64_t>(k)));
    }
    HybridReal uniform = (Rat(1) / norm) * c;
    if (!(std::abs(uniform.value()) < 0.5)) {
        const Rat margin = std::min(Rat(1, 20), (norm - Rat(1)) / (Rat(4) * norm));
        const Rat clamped = Rat(1, 2) - margin;
        uniform = HybridReal(c.value() > 0.0 ? clamped : -clamped);
    }
    return std::vector<HybridReal>(a_n.size(), uniform);
}

bool Sector::contains(const HybridReal &arg_over_pi) const
{
    // Offset from the centre in [−1, 1).
    const HybridReal off = reduce_mod2(arg_over_pi - center + HybridReal(Rat(1))) - HybridReal(Rat(1));
    return less(HybridReal(Rat(-1, 2)), off) && less(off, HybridReal(Rat(1, 2)));
}

Sector sector_of(const RatVec &a_n, const IntVec &p, const std::vector<HybridReal> &delta)
{
    return {reduce_mod2(HybridReal(Rat(1)) - pairing_raw(p, delta, a_n, true))};
}

bool in_theta(const HybridReal &angle_over_pi)
{
    const HybridReal w = reduce_mod2(angle_over_pi);
    return less(HybridReal(Rat(1, 2)), w) && less(w, HybridReal(Rat(3, 2)));
}

bool check_condition(Index ell, const RatMatrix &A, const std::vector<Polar> &y, const IntVec &p,
                     const std::vector<HybridReal> &delta)
{
    const Index d = A.rows();
    if (ell >= A.cols()) {
        throw Error(ErrorKind::InvalidArgument, "column index out of range");
    }
    HybridReal arg;
    if (ell >= d) {
        if (y.size() != A.cols() - d) {
            throw Error(ErrorKind::InvalidArgument, "y must have n - d entries");
        }
        const Polar &yl = y[ell - d];
        if (yl.is_zero()) {
            throw Error(ErrorKind::ZeroCoordinate, "y_" + std::to_string(ell + 1) + " = 0");
        }
        arg = yl.arg_over_pi;
    }
    return in_theta(arg + pairing_raw(p, delta, A.column(ell), true));
}

double UpsilonCycle::log_bound() const
{
    Rat norm(0);
    for (const auto &ak : a) {
        norm += ak;
    }
    return to_double(norm) * std::log(epsilon);
}

UpsilonCycle upsilon_strata(double epsilon, const RatVec &a_n, const IntVec &q)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
    }
    if (a_n.size() != q.size() || q.empty()) {
        throw Error(ErrorKind::InvalidArgument, "a(n) and q must have the same positive length");
    }
    for (Index k = 0; k < q.size(); ++k) {
        if (a_n[k] <= Rat(0) || q[k] <= 0) {
            throw Error(ErrorKind::InvalidArgument, "Upsilon needs a(n) > 0 and q > 0 componentwise");
        }
    }
    const Index d = q.size();
    UpsilonCycle cycle;
    cycle.epsilon = epsilon;
    cycle.a = a_n;
    cycle.q = q;

    std::vector<IndexSet> subsets;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        IndexSet eta;
        for (Index k = 0; k < d; ++k) {
            if (mask & (1u << k)) {
                eta.push_back(k);
            }
        }
        subsets.push_back(eta);
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](const IndexSet &x, const IndexSet &y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    for (const auto &eta : subsets) {
        IndexSet tau;
        for (Index k = 0; k < d; ++k) {
            if (std::find(eta.begin(), eta.end(), k) == eta.end()) {
                tau.push_back(k);
            }
        }
        IndexSet order = eta;
        order.insert(order.end(), tau.begin(), tau.end());
        const int signature = permutation_sign(order);
        for (unsigned bits = 0; bits < (1u << tau.size()); ++bits) {
            UpsilonPiece piece;
            piece.eta = eta;
            piece.tau = tau;
            int sum = 0;
            for (Index i = 0; i < tau.size(); ++i) {
                // First τ coordinate is the most significant bit.
                const int x = static_cast<int>((bits >> (tau.size() - 1 - i)) & 1u);
                piece.xi.push_back(x);
                sum += x;
            }
            piece.sign = signature * (((static_cast<int>(tau.size()) - sum) % 2 == 0) ? 1 : -1);
            cycle.pieces.push_back(piece);
        }
    }
    return cycle;
}

double log_rho(const UpsilonCycle &cycle, const UpsilonPiece &piece, const std::vector<double> &log_r_tau)
{
    if (piece.eta.empty()) {
        throw Error(ErrorKind::InvalidArgument, "log_rho on the open stratum");
    }
    if (log_r_tau.size() != piece.tau.size()) {
        throw Error(ErrorKind::InvalidArgument, "log_rho: wrong number of radial coordinates");
    }
    double num = cycle.log_bound();
    for (Index i = 0; i < piece.tau.size(); ++i) {
        num -= to_double(cycle.a[piece.tau[i]]) * log_r_tau[i];
    }
    double den = 0.0;
    for (Index k : piece.eta) {
        den += to_double(cycle.a[k]);
    }
    return num / den;
}

bool in_radial_domain(const UpsilonCycle &cycle, const UpsilonPiece &piece, const std::vector<double> &log_r,
                      double tol)
{
    if (log_r.size() != cycle.d()) {
        throw Error(ErrorKind::InvalidArgument, "in_radial_domain: wrong dimension");
    }
    if (piece.eta.empty()) {
        double s = 0.0;
        for (Index k = 0; k < cycle.d(); ++k) {
            s += to_double(cycle.a[k]) * log_r[k];
        }
        return s > cycle.log_bound() + tol;
    }
    std::vector<double> v_tau;
    for (Index k : piece.tau) {
        v_tau.push_back(log_r[k]);
    }
    const double lr = log_rho(cycle, piece, v_tau);
    for (Index k : piece.eta) {
        if (std::abs(log_r[k] - lr) > tol) {
            return false;
        }
    }
    for (Index k : piece.tau) {
        if (!(log_r[k] > lr + tol)) {
            return false;
        }
    }
    return true;
}

QuadResult quad_piece(const UpsilonCycle &cycle, const UpsilonPiece &piece, const LogIntegrand &G,
                      const QuadratureConfig &cfg)
{
    const Index d = cycle.d();
    if (d > 2) {
        throw Error(ErrorKind::UnsupportedDimension, "quad_piece supports d <= 2");
    }
    const Complex minus_i(0.0, -1.0);
    auto ray_angle = [&](Index i) {
        // u_k on the ray of argument −2q_kξ_kπ.
        const Index k = piece.tau[i];
        return Complex(0.0, -2.0 * kPi * static_cast<double>(cycle.q[k]) * piece.xi[i]);
    };
    auto angle_max = [&](Index k) { return 2.0 * kPi * static_cast<double>(cycle.q[k]); };
    CVec w(d);
    QuadResult r;

    if (d == 1) {
        if (piece.eta.empty()) {
            const Complex shift = ray_angle(0);
            const double v0 = cycle.log_bound() / to_double(cycle.a[0]);
            r = quad_tail_log([&](double v) { w[0] = v + shift; return G(w); }, v0, cfg);
        } else {
            const double lr = std::log(cycle.epsilon);
            r = quad_interval(
                [&](double th) { w[0] = Complex(lr, -th); return minus_i * G(w); }, 0.0, angle_max(0), cfg);
        }
    } else if (piece.eta.empty()) {
        const Complex s0 = ray_angle(0);
        const Complex s1 = ray_angle(1);
        const double a0 = to_double(cycle.a[0]);
        const double a1 = to_double(cycle.a[1]);
        // Outer axis 2 over ℝ, inner axis 1 above the boundary curve.
        r = quad_line_nested(
            [&](double v1) {
                const double v0_min = (cycle.log_bound() - a1 * v1) / a0;
                if (v0_min > cfg.scan_max) {
                    return QuadResult{}; // below exp(−e^{scan_max})
                }
                return quad_tail_log(
                    [&](double v0) {
                        w[0] = v0 + s0;
                        w[1] = v1 + s1;
                        return G(w);
                    },
                    v0_min, cfg);
            },
            0.0, cfg);
    } else if (piece.eta.size() == 1) {
        const Index k = piece.eta[0];
        const Index m = piece.tau[0];
        const Complex sm = ray_angle(0);
        const double lo = std::log(cycle.epsilon);
        // dw_k∧dw_m pulls back to −i dφ_k∧dv_m; the frame (φ_k, v_m) is what
        // piece.sign orients, so dw_1∧dw_2 needs the reordering sign.
        const Complex measure = k < m ? minus_i : -minus_i;
        r = quad_tail_log_nested(
            [&](double vm) {
                const double lr = log_rho(cycle, piece, {vm});
                // ρ = r_τ only at the corner vm = log ε, which the tail map reaches when
                // softplus underflows.
                if (!(lr <= vm + 1e-12 * (1.0 + std::abs(vm)))) {
                    throw Error(ErrorKind::ImplicitSolveFailure, "rho >= r_tau on a boundary stratum");
                }
                return quad_interval(
                    [&](double th) {
                        w[k] = Complex(lr, -th);
                        w[m] = vm + sm;
                        return measure * G(w);
                    },
                    0.0, angle_max(k), cfg);
            },
            lo, cfg);
    } else {
        const double lr = std::log(cycle.epsilon);
        r = quad_interval_nested(
            [&](double t0) {
                return quad_interval(
                    [&](double t1) {
                        w[0] = Complex(lr, -t0);
                        w[1] = Complex(lr, -t1);
                        return -G(w);
                    },
                    0.0, angle_max(1), cfg);
            },
            0.0, angle_max(0), cfg);
    }
    r.value *= static_cast<double>(piece.sign);
    return r;
}

} // namespace gkz
