#include "gkz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "gkz/error.hpp"

namespace gkz {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_sizes(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta, const std::vector<Polar> &y)
{
    const Index d = rp.d();
    if (beta.size() != d || spec.d() != d || spec.delta.size() != d) {
        throw Error(ErrorKind::InvalidArgument, "beta, p and delta must have d = " + std::to_string(d) + " entries");
    }
    if (y.size() != rp.n() - d) {
        throw Error(ErrorKind::InvalidArgument, "y must have n - d = " + std::to_string(rp.n() - d) + " entries");
    }
}

Rat total(const RatVec &v)
{
    return std::accumulate(v.begin(), v.end(), Rat(0));
}

RatVec add(RatVec a, const RatVec &b)
{
    for (Index i = 0; i < a.size(); ++i) {
        a[i] += b[i];
    }
    return a;
}

RatVec scale(const RatVec &a, std::int64_t s)
{
    RatVec r(a.size());
    for (Index i = 0; i < a.size(); ++i) {
        r[i] = a[i] * s;
    }
    return r;
}

// All multi-indices of length m and total degree L, larger leading entries first.
void compositions(Index m, std::int64_t L, const std::function<void(const MultiIndex &)> &fn)
{
    MultiIndex cur(m, 0);
    std::function<void(Index, std::int64_t)> rec = [&](Index i, std::int64_t left) {
        if (i + 1 >= m) {
            if (m > 0) {
                cur[m - 1] = left;
                fn(cur);
            } else if (left == 0) {
                fn(cur);
            }
            return;
        }
        for (std::int64_t v = left; v >= 0; --v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, L);
}

// e^{−iπ s} for complex s, exact on the real part when it is a half-integer.
Complex exp_minus_i_pi(Complex s)
{
    return exp_i_pi(-s.real()) * std::exp(kPi * s.imag());
}

Complex phase_for(const IntVec &p, const CVec &beta, const RatVec &shift)
{
    Complex s{};
    Rat sh(0);
    for (Index k = 0; k < beta.size(); ++k) {
        s += static_cast<double>(2 * p[k] + 1) * beta[k];
        sh += Rat(2 * p[k] + 1) * shift[k];
    }
    return exp_minus_i_pi(s) * exp_i_pi(HybridReal(sh));
}

// Σ_k log Γ(−β_k + shift_k).
Complex log_gamma_sum(const CVec &beta, const RatVec &shift)
{
    Complex s{};
    for (Index k = 0; k < beta.size(); ++k) {
        s += log_gamma(-beta[k] + to_double(shift[k]));
    }
    return s;
}

std::string describe_failures(const std::vector<std::pair<Index, bool>> &conds)
{
    std::string out;
    for (const auto &[ell, ok] : conds) {
        if (!ok) {
            out += (out.empty() ? "" : ", ") + std::to_string(ell + 1);
        }
    }
    return out;
}

// Central angle deviation |angle − π| in units of π, angle taken mod 2π.
double deviation_from_pi(const HybridReal &angle)
{
    return std::abs(std::remainder(angle.value() - 1.0, 2.0));
}

} // namespace

ConvergenceReport check_convergence(const ReducedProblem &rp, const CycleSpec &spec, const std::vector<Polar> &y,
                                    ConvergenceMode mode)
{
    const Index d = rp.d();
    if (y.size() != rp.n() - d) {
        throw Error(ErrorKind::InvalidArgument, "y must have n - d entries");
    }
    IndexSet eff;
    std::vector<Polar> y_eff;
    for (Index j = 0; j < rp.n(); ++j) {
        if (j < d) {
            eff.push_back(j);
        } else if (!y[j - d].is_zero()) {
            eff.push_back(j);
            y_eff.push_back(y[j - d]);
        }
    }
    const RatMatrix A = rp.A.select_columns(eff);
    auto condition = [&](Index ell) { return check_condition(ell, A, y_eff, spec.p, spec.delta); };

    ConvergenceReport rep;
    rep.mode = mode;
    rep.ok = true;
    if (mode == ConvergenceMode::Certified) {
        IndexSet tau;
        if (d <= 3) {
            tau = hull_boundary(A).tau;
        } else {
            tau.resize(A.cols());
            std::iota(tau.begin(), tau.end(), Index{0});
        }
        for (Index ell : tau) {
            const bool ok = condition(ell);
            rep.conditions.emplace_back(eff[ell], ok);
            rep.ok = rep.ok && ok;
        }
        return rep;
    }

    const HullBoundary hull = hull_boundary(A);
    IndexSet eta_sigma = hull.eta;
    for (Index k = 0; k < d; ++k) {
        if (std::find(eta_sigma.begin(), eta_sigma.end(), k) == eta_sigma.end()) {
            eta_sigma.push_back(k);
        }
    }
    for (Index ell : hull.eta) {
        const bool ok = condition(ell);
        rep.conditions.emplace_back(eff[ell], ok);
        rep.ok = rep.ok && ok;
    }
    double theta = 0.0;
    for (Index ell : eta_sigma) {
        HybridReal angle = pairing(spec, A.column(ell));
        if (ell >= d) {
            angle = angle + y_eff[ell - d].arg_over_pi;
        }
        theta = std::max(theta, deviation_from_pi(angle));
    }
    rep.cos_theta = std::cos(kPi * theta);

    IndexSet tau = hull.tau;
    for (Index k = 0; k < d; ++k) {
        if (std::find(tau.begin(), tau.end(), k) == tau.end()) {
            tau.push_back(k);
        }
    }
    for (Index j : tau) {
        if (std::find(eta_sigma.begin(), eta_sigma.end(), j) != eta_sigma.end()) {
            continue;
        }
        const NuDecomposition nu = nu_decomposition(A, hull.eta, j);
        double log_k = std::log(y_eff[j - d].abs);
        for (Index i = 0; i < hull.eta.size(); ++i) {
            const Index ell = hull.eta[i];
            if (ell >= d) {
                log_k -= to_double(nu.nu[i]) * std::log(y_eff[ell - d].abs);
            }
        }
        rep.smallness += std::exp(log_k);
    }
    rep.ok = rep.ok && rep.smallness < rep.cos_theta;
    return rep;
}

EvalResult eval_F(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta, const std::vector<Polar> &y,
                  const SolverConfig &cfg)
{
    check_sizes(rp, spec, beta, y);
    const Index d = rp.d();
    for (Index k = 0; k < d; ++k) {
        if (!(beta[k].real() < 0.0)) {
            throw Error(ErrorKind::ParameterOutOfHalfSpace,
                        "Re beta_" + std::to_string(k + 1) + " >= 0; use continue_F");
        }
    }
    const ConvergenceReport conv = check_convergence(rp, spec, y, cfg.mode);
    if (!conv.ok) {
        std::string msg = "convergence conditions fail for columns {" + describe_failures(conv.conditions) + "}";
        if (cfg.mode == ConvergenceMode::Extended && conv.smallness >= conv.cos_theta) {
            msg += "; smallness sum " + std::to_string(conv.smallness) + " >= cos theta " +
                   std::to_string(conv.cos_theta);
        }
        throw Error(ErrorKind::DivergentConfiguration, msg);
    }

    EvalResult res;
    res.conditions_checked = conv.conditions;
    res.phase = phase_beta(spec, beta);

    std::vector<Complex> rot(d);
    for (Index k = 0; k < d; ++k) {
        rot[k] = exp_i_pi(spec.delta[k]);
    }
    std::vector<Complex> z;
    std::vector<std::vector<double>> expo;
    for (Index j = d; j < rp.n(); ++j) {
        const Complex t = twist(spec, rp.a(j));
        res.twists.push_back(t);
        if (y[j - d].is_zero()) {
            continue;
        }
        z.push_back(t * y[j - d].value());
        std::vector<double> a(d);
        for (Index k = 0; k < d; ++k) {
            a[k] = to_double(rp.A(k, j));
        }
        expo.push_back(std::move(a));
    }

    auto g = [&](const std::vector<double> &v) {
        Complex e{};
        for (Index k = 0; k < d; ++k) {
            e -= beta[k] * v[k] + rot[k] * std::exp(v[k]);
        }
        for (Index j = 0; j < z.size(); ++j) {
            double s = 0.0;
            for (Index k = 0; k < d; ++k) {
                s += expo[j][k] * v[k];
            }
            e += z[j] * std::exp(s);
        }
        return std::exp(e);
    };
    std::vector<double> alphas(d);
    for (Index k = 0; k < d; ++k) {
        alphas[k] = -beta[k].real() - 1.0;
    }
    const QuadResult q = quad_product_log(g, alphas, cfg.quad);
    res.value = res.phase * q.value;
    res.error_estimate = std::abs(res.phase) * q.error;
    res.evaluations = q.evaluations;
    res.status = cfg.mode == ConvergenceMode::Certified ? "convergent-certified" : "convergent-extended";
    return res;
}

Complex eval_A0(const IntVec &p, const CVec &beta)
{
    return eval_A0_shifted(p, beta, RatVec(beta.size(), Rat(0)));
}

Complex eval_A0_shifted(const IntVec &p, const CVec &beta, const RatVec &shift)
{
    if (p.size() != beta.size() || shift.size() != beta.size()) {
        throw Error(ErrorKind::InvalidArgument, "p, beta and shift must have equal length");
    }
    return phase_for(p, beta, shift) * std::exp(log_gamma_sum(beta, shift));
}

Complex eval_A_coeff(const ReducedProblem &rp, const IntVec &p, const CVec &beta, std::int64_t m,
                     const CVec &y_prime, int trunc, const SolverConfig &cfg)
{
    const Index d = rp.d();
    const Index n = rp.n();
    if (n == d) {
        throw Error(ErrorKind::InvalidArgument, "no column outside the simplex");
    }
    if (m < 0 || beta.size() != d || p.size() != d || y_prime.size() != n - d - 1) {
        throw Error(ErrorKind::InvalidArgument, "eval_A_coeff: need m >= 0, |beta| = |p| = d, |y'| = n - d - 1");
    }
    const RatVec base = scale(rp.a(n - 1), m);
    const Index mp = y_prime.size();

    auto term = [&](const MultiIndex &mu) -> Complex {
        RatVec shift = base;
        Complex lg{};
        for (Index j = 0; j < mp; ++j) {
            if (mu[j] == 0) {
                continue;
            }
            if (y_prime[j] == Complex{}) {
                return {};
            }
            shift = add(std::move(shift), scale(rp.a(d + j), mu[j]));
            lg += static_cast<double>(mu[j]) * std::log(y_prime[j]) - std::lgamma(static_cast<double>(mu[j]) + 1.0);
        }
        try {
            return phase_for(p, beta, shift) * std::exp(lg + log_gamma_sum(beta, shift));
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::PoleAtNonpositiveInteger) {
                throw Error(ErrorKind::PoleEncountered, "Gamma pole in the coefficient series at shift m = " +
                                                            std::to_string(m));
            }
            throw;
        }
    };

    Complex sum{};
    int quiet = 0;
    for (std::int64_t L = 0;; ++L) {
        if (trunc > 0 && L > trunc) {
            break;
        }
        if (L > cfg.series_max_degree) {
            throw Error(ErrorKind::NoConvergence, "coefficient series did not settle by degree " +
                                                      std::to_string(cfg.series_max_degree));
        }
        double layer = 0.0;
        compositions(mp, L, [&](const MultiIndex &mu) {
            const Complex t = term(mu);
            sum += t;
            layer = std::max(layer, std::abs(t));
        });
        if (mp == 0) {
            break;
        }
        if (trunc <= 0) {
            quiet = layer < std::max(cfg.series_abs_tol, cfg.series_rel_tol * std::abs(sum)) ? quiet + 1 : 0;
            if (quiet >= 3) {
                break;
            }
        }
    }
    return sum;
}

ExpansionReport expansion_report(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                                 const std::vector<Polar> &y, int N, const SolverConfig &cfg)
{
    check_sizes(rp, spec, beta, y);
    const Index d = rp.d();
    const Index n = rp.n();
    if (N < 0 || N > 12) {
        throw Error(ErrorKind::InvalidArgument, "expansion order must lie in [0, 12]");
    }
    if (n == d) {
        throw Error(ErrorKind::InvalidArgument, "no column outside the simplex");
    }
    ExpansionReport rep;
    rep.table.kind = SeriesKind::AsymptoticInYn;
    rep.table.gevrey_index = total(rp.a(n - 1));
    CVec y_prime;
    for (Index j = d; j + 1 < n; ++j) {
        y_prime.push_back(y[j - d].value());
    }
    std::vector<Complex> coef;
    double factorial = 1.0;
    for (int m = 0; m < N; ++m) {
        if (m > 0) {
            factorial *= m;
        }
        const Complex c = eval_A_coeff(rp, spec.p, beta, m, y_prime, 0, cfg) / factorial;
        coef.push_back(c);
        rep.table.support.push_back({m});
        rep.table.coefficients[{m}] = c;
    }

    const Complex yn = y.back().value();
    std::vector<double> xs, ys;
    for (double s : rep.scales) {
        std::vector<Polar> ys_pt = y;
        ys_pt.back().abs *= s;
        const EvalResult f = eval_F(rp, spec, beta, ys_pt, cfg);
        Complex partial{};
        Complex power{1.0, 0.0};
        for (int m = 0; m < N; ++m) {
            partial += coef[m] * power;
            power *= s * yn;
        }
        const double r = std::abs(f.value - partial);
        rep.remainders.push_back(r);
        rep.remainder_errors.push_back(f.error_estimate);
        if (r > 0.0) {
            xs.push_back(std::log2(s));
            ys.push_back(std::log2(r));
        }
    }
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double sxy = 0.0, sxx = 0.0;
        for (Index i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.slope = sxy / sxx;
    }
    return rep;
}

Complex gevrey_coefficient(const MultiIndex &k, const MultiIndex &m, const CVec &beta, const RatMatrix &A_sigma_bar)
{
    if (k.size() != A_sigma_bar.cols() || m.size() != k.size() || beta.size() != A_sigma_bar.rows()) {
        throw Error(ErrorKind::InvalidArgument, "gevrey_coefficient: size mismatch");
    }
    MultiIndex mu(k.size());
    for (Index i = 0; i < k.size(); ++i) {
        mu[i] = k[i] + m[i];
        if (k[i] < 0 || mu[i] < 0) {
            throw Error(ErrorKind::NotInSupport, "k and k + m must be nonnegative");
        }
    }
    if (!lambda_membership(k, m, A_sigma_bar)) {
        throw Error(ErrorKind::NotInSupport, "A_sigma_bar * m is not integral");
    }
    RatVec image(A_sigma_bar.rows(), Rat(0));
    for (Index r = 0; r < A_sigma_bar.rows(); ++r) {
        for (Index c = 0; c < mu.size(); ++c) {
            image[r] += A_sigma_bar(r, c) * mu[c];
        }
    }
    try {
        return exp_i_pi(HybridReal(total(image))) * std::exp(log_gamma_sum(beta, image));
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::PoleAtNonpositiveInteger) {
            throw Error(ErrorKind::PoleEncountered, "Gamma pole in the S_k coefficient");
        }
        throw;
    }
}

SeriesTable gevrey_table(const MultiIndex &k, const CVec &beta, const RatMatrix &A_sigma_bar, int order)
{
    SeriesTable t;
    t.kind = SeriesKind::GevreySk;
    t.k_label = k;
    t.gevrey_index = A_sigma_bar.cols() ? total(A_sigma_bar.column(A_sigma_bar.cols() - 1)) : Rat(0);
    for (std::int64_t L = 0; L <= order; ++L) {
        compositions(k.size(), L, [&](const MultiIndex &mu) {
            MultiIndex m(k.size());
            for (Index i = 0; i < k.size(); ++i) {
                m[i] = mu[i] - k[i];
            }
            if (!lambda_membership(k, m, A_sigma_bar)) {
                return;
            }
            t.support.push_back(mu);
            t.coefficients[mu] = gevrey_coefficient(k, m, beta, A_sigma_bar);
        });
    }
    return t;
}

SeriesTable asymptotic_table(const ReducedProblem &rp, const IntVec &p, const CVec &beta, int order)
{
    const Index d = rp.d();
    SeriesTable t;
    t.kind = SeriesKind::AsymptoticInYn;
    t.gevrey_index = total(rp.a(rp.n() - 1));
    const RatMatrix As = rp.A_sigma_bar();
    for (std::int64_t L = 0; L <= order; ++L) {
        compositions(rp.n() - d, L, [&](const MultiIndex &mu) {
            RatVec shift(d, Rat(0));
            for (Index j = 0; j < mu.size(); ++j) {
                shift = add(std::move(shift), scale(As.column(j), mu[j]));
            }
            t.support.push_back(mu);
            t.coefficients[mu] = eval_A0_shifted(p, beta, shift);
        });
    }
    return t;
}

namespace {

Complex complex_determinant(std::vector<CVec> m)
{
    const Index n = m.size();
    Complex det{1.0, 0.0};
    for (Index c = 0; c < n; ++c) {
        Index piv = c;
        for (Index r = c + 1; r < n; ++r) {
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) {
                piv = r;
            }
        }
        if (m[piv][c] == Complex{}) {
            return {};
        }
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (Index r = c + 1; r < n; ++r) {
            const Complex f = m[r][c] / m[c][c];
            for (Index k = c; k < n; ++k) {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    return det;
}

} // namespace

ConnectionResult connection_solve(const BasisData &basis, const RatMatrix &A_sigma_bar)
{
    if (basis.omega.size() != basis.coset_reps.size()) {
        throw Error(ErrorKind::InvalidArgument, "Omega and the coset representatives differ in size");
    }
    ConnectionResult c;
    c.omega = basis.omega;
    c.reps = basis.coset_reps;
    for (const auto &p : c.reps) {
        std::vector<Rat> ex;
        CVec row;
        for (const auto &k : c.omega) {
            const RatVec image = apply(A_sigma_bar, k);
            Rat e(0);
            for (Index i = 0; i < p.size(); ++i) {
                e += Rat(2 * p[i]) * image[i];
            }
            e = mod(e, Rat(2));
            ex.push_back(e);
            row.push_back(exp_i_pi(HybridReal(e)));
        }
        c.exponent.push_back(std::move(ex));
        c.matrix.push_back(std::move(row));
    }
    c.determinant = complex_determinant(c.matrix);
    if (std::abs(c.determinant) < 1e-8) {
        throw Error(ErrorKind::SingularConnection, "|det M| < 1e-8");
    }
    return c;
}

Complex reconstruct_coefficient(const ConnectionResult &conn, Index p_row, const MultiIndex &mu, const CVec &beta,
                                const RatMatrix &A_sigma_bar)
{
    if (p_row >= conn.reps.size()) {
        throw Error(ErrorKind::InvalidArgument, "representative index out of range");
    }
    for (Index i = 0; i < conn.omega.size(); ++i) {
        const MultiIndex &k = conn.omega[i];
        MultiIndex m(k.size());
        for (Index j = 0; j < k.size(); ++j) {
            m[j] = mu[j] - k[j];
        }
        if (!lambda_membership(k, m, A_sigma_bar)) {
            continue;
        }
        const IntVec &p = conn.reps[p_row];
        Complex s{};
        for (Index j = 0; j < beta.size(); ++j) {
            s += static_cast<double>(2 * p[j] + 1) * beta[j];
        }
        return exp_minus_i_pi(s) * conn.matrix[p_row][i] * gevrey_coefficient(k, m, beta, A_sigma_bar);
    }
    throw Error(ErrorKind::NotInSupport, "no element of Omega shares the coset of mu");
}

namespace {

class Continuation {
public:
    Continuation(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta, const std::vector<Polar> &y,
                 const SolverConfig &cfg)
        : rp_(rp), spec_(spec), beta_(beta), y_(y), cfg_(cfg)
    {
    }

    struct Node {
        Complex value;
        double error;
    };

    // Index of the coordinate to reduce, or d when none needs it.
    Index pivot(const CVec &b) const
    {
        const Index d = b.size();
        Index best = d;
        for (Index k = 0; k < d; ++k) {
            if (b[k].real() < -cfg_.continuation_margin) {
                continue;
            }
            if (cfg_.pivot == PivotRule::LowestIndex) {
                return k;
            }
            if (best == d || b[k].real() > b[best].real()) {
                best = k;
            }
        }
        return best;
    }

    Node value(const RatVec &shift)
    {
        if (auto it = memo_.find(shift); it != memo_.end()) {
            return it->second;
        }
        if (++nodes_ > cfg_.recursion_budget) {
            throw Error(ErrorKind::RecursionBudgetExceeded,
                        "continuation visited more than " + std::to_string(cfg_.recursion_budget) + " shifts");
        }
        const Index d = rp_.d();
        CVec b(d);
        for (Index k = 0; k < d; ++k) {
            b[k] = beta_[k] - to_double(shift[k]);
        }
        const Index k = pivot(b);
        Node out{};
        if (k == d) {
            const EvalResult r = eval_F(rp_, spec_, b, y_, cfg_);
            evaluations_ += r.evaluations;
            out = {r.value, r.error_estimate};
        } else {
            if (std::abs(b[k]) <= cfg_.pole_tol * (std::abs(b[k]) + 1.0)) {
                throw Error(ErrorKind::PoleEncountered,
                            "beta_" + std::to_string(k + 1) + " hits 0 along the recurrence");
            }
            RatVec next = shift;
            next[k] += 1;
            Node acc = value(next);
            for (Index j = d; j < rp_.n(); ++j) {
                const Rat ajk = rp_.A(k, j);
                if (ajk == 0 || y_[j - d].is_zero()) {
                    continue;
                }
                const Complex w = to_double(ajk) * y_[j - d].value();
                const Node t = value(add(shift, rp_.a(j)));
                acc.value += w * t.value;
                acc.error += std::abs(w) * t.error;
            }
            out = {acc.value / b[k], acc.error / std::abs(b[k])};
        }
        memo_.emplace(shift, out);
        return out;
    }

    std::size_t evaluations() const noexcept { return evaluations_; }

private:
    const ReducedProblem &rp_;
    const CycleSpec &spec_;
    const CVec &beta_;
    const std::vector<Polar> &y_;
    const SolverConfig &cfg_;
    std::map<RatVec, Node> memo_;
    std::size_t nodes_ = 0;
    std::size_t evaluations_ = 0;
};

} // namespace

EvalResult continue_F(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                      const std::vector<Polar> &y, const SolverConfig &cfg)
{
    check_sizes(rp, spec, beta, y);
    Continuation cont(rp, spec, beta, y, cfg);
    if (cont.pivot(beta) == rp.d()) {
        return eval_F(rp, spec, beta, y, cfg);
    }
    if (pole_and_resonance(beta, rp, cfg).in_P) {
        throw Error(ErrorKind::PoleEncountered, "beta lies on the pole set");
    }
    const ConvergenceReport conv = check_convergence(rp, spec, y, cfg.mode);
    const auto node = cont.value(RatVec(rp.d(), Rat(0)));
    EvalResult res;
    res.value = node.value;
    res.error_estimate = node.error;
    res.conditions_checked = conv.conditions;
    res.phase = phase_beta(spec, beta);
    for (Index j = rp.d(); j < rp.n(); ++j) {
        res.twists.push_back(twist(spec, rp.a(j)));
    }
    res.status = "continued";
    res.evaluations = cont.evaluations();
    return res;
}

ResidualReport residual_suite(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                              const std::vector<Polar> &y, const SolverConfig &cfg)
{
    check_sizes(rp, spec, beta, y);
    const Index d = rp.d();
    const Index n = rp.n();
    auto F = [&](const RatVec &shift, const std::vector<Polar> &yy) {
        CVec b(d);
        for (Index k = 0; k < d; ++k) {
            b[k] = beta[k] - to_double(shift[k]);
        }
        return continue_F(rp, spec, b, yy, cfg).value;
    };
    const RatVec zero(d, Rat(0));
    ResidualReport rep;
    rep.value = F(zero, y);
    std::map<Index, Complex> shifted; // F(β − a(j)), j ∉ σ
    for (Index j = d; j < n; ++j) {
        if (!y[j - d].is_zero()) {
            shifted[j] = F(rp.a(j), y);
        }
    }
    for (Index k = 0; k < d; ++k) {
        RatVec ek = zero;
        ek[k] = 1;
        const Complex lhs = beta[k] * rep.value;
        Complex rhs = F(ek, y);
        double scale_ = std::max(std::abs(lhs), std::abs(rhs));
        for (const auto &[j, fj] : shifted) {
            const Complex t = to_double(rp.A(k, j)) * y[j - d].value() * fj;
            rhs += t;
            scale_ = std::max(scale_, std::abs(t));
        }
        rep.contiguity.push_back(scale_ > 0.0 ? std::abs(lhs - rhs) / scale_ : 0.0);
    }
    for (Index j = d; j < n; ++j) {
        const Polar &yj = y[j - d];
        if (yj.is_zero()) {
            rep.derivative.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.steps.push_back(0.0);
            continue;
        }
        const double h = 1e-4 * std::max(1.0, yj.abs);
        auto moved = [&](double step) {
            std::vector<Polar> yy = y;
            const Complex v = yj.value() + step;
            // Stay on the same sheet: add the small change of argument.
            yy[j - d].abs = std::abs(v);
            yy[j - d].arg_over_pi = yj.arg_over_pi + HybridReal::from_double(std::arg(v / yj.value()) / kPi);
            return yy;
        };
        const Complex fd = (F(zero, moved(h)) - F(zero, moved(-h))) / (2.0 * h);
        const Complex target = shifted.at(j);
        const double scale_ = std::max(std::abs(fd), std::abs(target));
        rep.derivative.push_back(scale_ > 0.0 ? std::abs(fd - target) / scale_ : 0.0);
        rep.steps.push_back(h);
    }
    return rep;
}

namespace {

// Whether N (≥ 0) is a sum of the nonnegative generators.
bool in_semigroup(std::int64_t N, const std::vector<std::int64_t> &gens, std::int64_t bound)
{
    std::vector<std::int64_t> pos;
    for (auto g : gens) {
        if (g > 0) {
            pos.push_back(g);
        }
    }
    if (N == 0) {
        return true;
    }
    if (pos.empty()) {
        return false;
    }
    std::int64_t g = 0;
    for (auto v : pos) {
        g = std::gcd(g, v);
    }
    if (N % g != 0) {
        return false;
    }
    const auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
    // Every multiple of g beyond (lo/g)(hi/g)·g is representable.
    const std::int64_t frob = (*lo / g) * (*hi / g) * g;
    if (N > frob) {
        return true;
    }
    if (N > bound) {
        throw Error(ErrorKind::EnumerationBudgetExceeded, "pole enumeration bound exceeded");
    }
    std::vector<char> reach(static_cast<std::size_t>(N) + 1, 0);
    reach[0] = 1;
    for (std::int64_t v = 1; v <= N; ++v) {
        for (auto gen : pos) {
            if (gen <= v && reach[v - gen]) {
                reach[v] = 1;
                break;
            }
        }
    }
    return reach[N] != 0;
}

} // namespace

PoleInfo pole_and_resonance(const CVec &beta, const ReducedProblem &rp, const SolverConfig &cfg)
{
    if (beta.size() != rp.d()) {
        throw Error(ErrorKind::InvalidArgument, "beta must have d entries");
    }
    PoleInfo info;
    const double tol = cfg.pole_tol;
    for (Index k = 0; k < rp.d(); ++k) {
        const Complex b = beta[k];
        if (std::abs(b.imag()) > tol * (std::abs(b) + 1.0)) {
            continue;
        }
        const double qb = static_cast<double>(rp.q[k]) * b.real();
        const double N = std::round(qb);
        if (std::abs(qb - N) > tol * (1.0 + std::abs(qb))) {
            continue;
        }
        info.resonant = true;
        std::vector<std::int64_t> gens;
        bool has_pos = false, has_neg = false;
        for (Index j = 0; j < rp.n(); ++j) {
            const Rat v = rp.A(k, j) * rp.q[k];
            gens.push_back(v.numerator());
            has_pos = has_pos || v > 0;
            has_neg = has_neg || v < 0;
        }
        const auto Ni = static_cast<std::int64_t>(N);
        bool hit = false;
        if (has_pos && has_neg) {
            // Generators of both signs span the whole group gcd·ℤ.
            std::int64_t g = 0;
            for (auto v : gens) {
                g = std::gcd(g, std::abs(v));
            }
            hit = Ni % g == 0;
        } else if (has_neg) {
            for (auto &v : gens) {
                v = -v;
            }
            hit = Ni <= 0 && in_semigroup(-Ni, gens, cfg.pole_enumeration_bound);
        } else {
            hit = Ni >= 0 && in_semigroup(Ni, gens, cfg.pole_enumeration_bound);
        }
        info.in_P = info.in_P || hit;
    }
    return info;
}

HankelReport eval_H_upsilon(const ReducedProblem &rp, const CycleSpec &spec, const CVec &beta,
                            const std::vector<Polar> &y, double epsilon, const SolverConfig &cfg)
{
    check_sizes(rp, spec, beta, y);
    const Index d = rp.d();
    const Index n = rp.n();
    if (n == d) {
        throw Error(ErrorKind::InvalidArgument, "the cycle is built from a(n); no column outside the simplex");
    }
    const ConvergenceReport conv = check_convergence(rp, spec, y, cfg.mode);
    if (!conv.ok) {
        throw Error(ErrorKind::DivergentConfiguration,
                    "convergence conditions fail for columns {" + describe_failures(conv.conditions) + "}");
    }
    const UpsilonCycle cycle = upsilon_strata(epsilon, rp.a(n - 1), rp.q);

    std::vector<Complex> rot(d);
    for (Index k = 0; k < d; ++k) {
        rot[k] = exp_i_pi(spec.delta[k]);
    }
    std::vector<Complex> z;
    std::vector<std::vector<double>> expo;
    HankelReport rep;
    for (Index j = d; j < n; ++j) {
        const Complex t = twist(spec, rp.a(j));
        rep.h.twists.push_back(t);
        if (y[j - d].is_zero()) {
            continue;
        }
        z.push_back(t * y[j - d].value());
        std::vector<double> a(d);
        for (Index k = 0; k < d; ++k) {
            a[k] = to_double(rp.A(k, j));
        }
        expo.push_back(std::move(a));
    }
    const LogIntegrand G = [&](const CVec &w) {
        Complex e{};
        for (Index k = 0; k < d; ++k) {
            e -= beta[k] * w[k] + rot[k] * std::exp(w[k]);
        }
        for (Index j = 0; j < z.size(); ++j) {
            Complex s{};
            for (Index k = 0; k < d; ++k) {
                s += expo[j][k] * w[k];
            }
            e += z[j] * std::exp(s);
        }
        return std::exp(e);
    };

    for (const auto &piece : cycle.pieces) {
        const QuadResult q = quad_piece(cycle, piece, G, cfg.quad);
        rep.h.value += q.value;
        rep.h.error_estimate += q.error;
        rep.h.evaluations += q.evaluations;
    }
    rep.h.conditions_checked = conv.conditions;
    rep.h.phase = phase_beta(spec, beta);
    rep.h.status = "hankel";

    rep.hankel_factor = {1.0, 0.0};
    for (Index k = 0; k < d; ++k) {
        const double qk = static_cast<double>(rp.q[k]);
        rep.hankel_factor *= exp_i_pi(2.0 * qk * beta[k].real()) * std::exp(-2.0 * kPi * qk * beta[k].imag()) - 1.0;
    }
    rep.lhs = rep.h.phase * rep.h.value;
    if (pole_and_resonance(beta, rp, cfg).in_P) {
        rep.relative_gap = std::abs(rep.lhs);
        return rep;
    }
    const EvalResult f = continue_F(rp, spec, beta, y, cfg);
    rep.rhs = rep.hankel_factor * f.value;
    const double scale_ = std::abs(*rep.rhs);
    rep.relative_gap = scale_ > 0.0 ? std::abs(rep.lhs - *rep.rhs) / scale_ : std::abs(rep.lhs);
    return rep;
}

ReducedInputs reduce_inputs(const ToricProblem &tp)
{
    const Index d = tp.B.rows();
    const Index n = tp.B.cols();
    if (tp.gamma.size() != d || tp.x.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "gamma needs d entries and x needs n entries");
    }
    for (Index s : tp.sigma) {
        if (s < n && tp.x[s].is_zero()) {
            throw Error(ErrorKind::ZeroSimplexCoordinate, "x_" + std::to_string(s + 1) + " = 0");
        }
    }
    ReducedInputs out;
    out.rp = reduce_problem(tp.B, tp.sigma);
    const ReducedProblem &rp = out.rp;
    out.beta.assign(d, Complex{});
    for (Index i = 0; i < d; ++i) {
        for (Index k = 0; k < d; ++k) {
            out.beta[i] += to_double(rp.B_sigma_inverse(i, k)) * tp.gamma[k];
        }
    }
    for (Index j = d; j < n; ++j) {
        const Polar &xc = tp.x[rp.column_order[j]];
        Polar yj;
        if (!xc.is_zero()) {
            double log_abs = std::log(xc.abs);
            HybridReal arg = xc.arg_over_pi;
            for (Index k = 0; k < d; ++k) {
                const Polar &xs = tp.x[rp.sigma[k]];
                log_abs -= to_double(rp.A(k, j)) * std::log(xs.abs);
                arg = arg - rp.A(k, j) * xs.arg_over_pi;
            }
            yj.abs = std::exp(log_abs);
            yj.arg_over_pi = arg;
        }
        out.y.push_back(yj);
    }
    Complex log_mono{};
    for (Index k = 0; k < d; ++k) {
        log_mono += out.beta[k] * tp.x[rp.sigma[k]].log();
    }
    out.prefactor = to_double(determinant(rp.B_sigma_inverse)) * std::exp(log_mono);
    return out;
}

EvalResult eval_I(const ToricProblem &tp, const CycleSpec &spec, const SolverConfig &cfg, bool allow_continuation)
{
    const ReducedInputs in = reduce_inputs(tp);
    EvalResult r = allow_continuation ? continue_F(in.rp, spec, in.beta, in.y, cfg)
                                      : eval_F(in.rp, spec, in.beta, in.y, cfg);
    r.value *= in.prefactor;
    r.error_estimate *= std::abs(in.prefactor);
    return r;
}

} // namespace gkz
