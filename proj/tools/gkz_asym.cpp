#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkz/error.hpp"
#include "gkz/geometry.hpp"
#include "gkz/io.hpp"
#include "gkz/solver.hpp"

using namespace gkz;
using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kInputError = 2, kNoConvergence = 3, kAssumption = 4 };

struct AssumptionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::SchemaVersionMismatch:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::ZeroSimplexCoordinate:
        return kInputError;
    case ErrorKind::NoConvergence:
    case ErrorKind::EndpointSingularity:
    case ErrorKind::ImplicitSolveFailure:
    case ErrorKind::RecursionBudgetExceeded:
    case ErrorKind::EnumerationBudgetExceeded:
        return kNoConvergence;
    default:
        return kAssumption;
    }
}

struct Options {
    std::string command;
    std::string problem;
    int order = 6;
    double tol = 1e-8;
    std::optional<double> epsilon;
    std::string mode;
    std::string p;
    std::string delta;
    std::string out;
    std::string csv;
    std::string suite = "all";
    int jobs = 1;
    bool deterministic = false;
};

std::string join(const std::vector<std::int64_t> &v, const char *sep = ",")
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? sep : "") + std::to_string(v[i]);
    }
    return s;
}

ordered_json cjson(Complex c)
{
    return complex_to_json(c);
}

ordered_json polar_json(const Polar &p)
{
    ordered_json j;
    j["abs"] = format_double(p.abs);
    j["arg_over_pi"] = to_string(p.arg_over_pi.exact);
    if (p.arg_over_pi.rest != 0.0) {
        j["arg_over_pi_rest"] = format_double(p.arg_over_pi.rest);
    }
    return j;
}

ordered_json hybrid_json(const HybridReal &h)
{
    if (h.rest == 0.0) {
        return to_string(h.exact);
    }
    return format_double(h.value());
}

ordered_json index_list(const IndexSet &s, const IndexSet *order = nullptr)
{
    ordered_json j = ordered_json::array();
    for (Index i : s) {
        j.push_back((order ? (*order)[i] : i) + 1);
    }
    return j;
}

std::vector<std::string> split(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    return out;
}

struct Setup {
    ProblemFile file;
    ReducedInputs in;
    CycleSpec spec;
    SolverConfig cfg;
    double epsilon = 0.1;
    bool delta_auto = true;
};

Setup prepare(const Options &opt)
{
    Setup s;
    s.file = load_problem(opt.problem);
    s.in = reduce_inputs(s.file.problem);
    const ReducedProblem &rp = s.in.rp;
    const Index d = rp.d();

    IntVec p(d, 0);
    if (!opt.p.empty()) {
        const auto parts = split(opt.p);
        if (parts.size() != d) {
            throw Error(ErrorKind::InvalidArgument, "--p needs " + std::to_string(d) + " integers");
        }
        for (Index k = 0; k < d; ++k) {
            p[k] = floor(parse_rational(parts[k]));
            if (!is_integer(parse_rational(parts[k]))) {
                throw Error(ErrorKind::InvalidArgument, "--p entries must be integers");
            }
        }
    } else if (s.file.p) {
        p = *s.file.p;
    }

    std::vector<HybridReal> delta;
    if (!opt.delta.empty() && opt.delta != "auto") {
        const auto parts = split(opt.delta);
        if (parts.size() != d) {
            throw Error(ErrorKind::InvalidArgument, "--delta needs " + std::to_string(d) + " rationals");
        }
        for (const auto &part : parts) {
            delta.emplace_back(parse_rational(part));
        }
        s.delta_auto = false;
    } else if (opt.delta.empty() && s.file.delta) {
        delta = *s.file.delta;
        s.delta_auto = false;
    } else if (rp.n() > d && !s.in.y.back().is_zero()) {
        delta = choose_delta(rp.a(rp.n() - 1), p, s.in.y.back().arg_over_pi);
    } else {
        delta.assign(d, HybridReal(Rat(0)));
    }
    s.spec = make_cycle_spec(p, delta);

    s.cfg.quad = with_environment(s.cfg.quad);
    if (s.file.rel_tol) {
        s.cfg.quad.rel_tol = *s.file.rel_tol;
    }
    if (s.file.abs_tol) {
        s.cfg.quad.abs_tol = *s.file.abs_tol;
    }
    const std::string mode = !opt.mode.empty() ? opt.mode : s.file.mode.value_or("certified");
    if (mode != "certified" && mode != "extended") {
        throw Error(ErrorKind::InvalidArgument, "--mode must be certified or extended");
    }
    s.cfg.mode = mode == "certified" ? ConvergenceMode::Certified : ConvergenceMode::Extended;
    s.epsilon = opt.epsilon.value_or(s.file.epsilon.value_or(0.1));
    return s;
}

ordered_json eval_json(const EvalResult &r, const IndexSet &order)
{
    ordered_json j;
    j["value"] = cjson(r.value);
    j["error_estimate"] = format_double(r.error_estimate);
    j["status"] = r.status;
    ordered_json conds = ordered_json::array();
    for (const auto &[ell, ok] : r.conditions_checked) {
        conds.push_back({{"column", order[ell] + 1}, {"holds", ok}});
    }
    j["conditions"] = conds;
    j["phase"] = cjson(r.phase);
    return j;
}

ordered_json setup_json(const Setup &s)
{
    const ReducedProblem &rp = s.in.rp;
    ordered_json j;
    ordered_json beta = ordered_json::array();
    for (const auto &b : s.in.beta) {
        beta.push_back(cjson(b));
    }
    j["beta"] = beta;
    ordered_json y = ordered_json::array();
    for (const auto &yj : s.in.y) {
        y.push_back(polar_json(yj));
    }
    j["y"] = y;
    j["p"] = s.spec.p;
    ordered_json delta = ordered_json::array();
    for (const auto &h : s.spec.delta) {
        delta.push_back(hybrid_json(h));
    }
    j["delta"] = delta;
    j["delta_auto"] = s.delta_auto;
    j["q"] = rp.q;
    j["lattice_index"] = rp.lattice_index;
    j["column_order"] = index_list(rp.column_order);
    ordered_json A = ordered_json::array();
    for (Index r = 0; r < rp.d(); ++r) {
        ordered_json row = ordered_json::array();
        for (Index c = 0; c < rp.n(); ++c) {
            row.push_back(to_string(rp.A(r, c)));
        }
        A.push_back(row);
    }
    j["A"] = A;
    return j;
}

struct Report {
    ordered_json results = ordered_json::object();
    ordered_json checks = ordered_json::array();
    bool ok = true;
    std::vector<std::pair<std::string, std::vector<std::pair<MultiIndex, Complex>>>> csv_tables;

    void check(const std::string &name, bool pass, double value, double tol)
    {
        checks.push_back({{"name", name}, {"pass", pass}, {"value", format_double(value)}, {"tol", format_double(tol)}});
        ok = ok && pass;
    }
};

std::string mi_string(const MultiIndex &m)
{
    return join(m, " ");
}

ordered_json table_json(const SeriesTable &t)
{
    ordered_json j;
    j["kind"] = t.kind == SeriesKind::GevreySk ? "gevrey-Sk" : "asymptotic-in-yn";
    if (t.kind == SeriesKind::GevreySk) {
        j["k"] = t.k_label;
    }
    j["gevrey_index"] = to_string(t.gevrey_index);
    ordered_json rows = ordered_json::array();
    for (const auto &mu : t.support) {
        const Complex c = t.coefficients.at(mu);
        rows.push_back({{"multi_index", mu}, {"re", format_double(c.real())}, {"im", format_double(c.imag())}});
    }
    j["coefficients"] = rows;
    return j;
}

void add_csv(Report &rep, const std::string &label, const SeriesTable &t)
{
    std::vector<std::pair<MultiIndex, Complex>> rows;
    for (const auto &mu : t.support) {
        rows.emplace_back(mu, t.coefficients.at(mu));
    }
    rep.csv_tables.emplace_back(label, std::move(rows));
}

// Runs fn(i) for i < count, in parallel when allowed; results keep index order.
template <typename T>
std::vector<T> run_indexed(std::size_t count, int jobs, bool deterministic, const std::function<T(std::size_t)> &fn)
{
    std::vector<T> out(count);
    if (deterministic || jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(jobs)) {
        std::vector<std::future<T>> batch;
        for (std::size_t i = start; i < std::min(count, start + jobs); ++i) {
            batch.push_back(std::async(std::launch::async, fn, i));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            out[start + i] = batch[i].get();
        }
    }
    return out;
}

void cmd_check(const Setup &s, Report &rep)
{
    const ToricProblem &tp = s.file.problem;
    const ReducedProblem &rp = s.in.rp;
    const AssumptionDiagnostics diag = validate_assumption_B(tp.B, tp.sigma);
    ordered_json cols = ordered_json::array();
    for (const auto &c : diag.columns) {
        ordered_json coords = ordered_json::array();
        for (const auto &x : c.coordinates) {
            coords.push_back(to_string(x));
        }
        cols.push_back({{"column", c.column + 1}, {"ok", c.ok}, {"reason", c.reason}, {"coordinates", coords}});
    }
    rep.results["assumption"] = {{"ok", diag.ok}, {"columns", cols}};
    rep.check("assumption", diag.ok, diag.ok ? 0.0 : 1.0, 0.0);
    if (!diag.ok) {
        return;
    }
    if (rp.d() <= 3) {
        const GeometryReport g = geometry_report(rp.A);
        ordered_json nu = ordered_json::object();
        for (const auto &[j, dec] : g.nu) {
            ordered_json v = ordered_json::array();
            for (const auto &x : dec.nu) {
                v.push_back(to_string(x));
            }
            nu[std::to_string(rp.column_order[j] + 1)] = {{"nu", v}, {"kappa", to_string(dec.kappa)}};
        }
        rep.results["geometry"] = {{"eta", index_list(g.hull.eta, &rp.column_order)},
                                   {"tau", index_list(g.hull.tau, &rp.column_order)},
                                   {"nu", nu},
                                   {"gevrey_index", to_string(g.gevrey_index)}};
    }
    if (rp.n() > rp.d() && std::none_of(s.in.y.begin(), s.in.y.end(), [](const Polar &p) { return p.is_zero(); })) {
        rep.results["sector"] = {
            {"center_over_pi", hybrid_json(sector_of(rp.a(rp.n() - 1), s.spec.p, s.spec.delta).center)}};
    }
    const ConvergenceReport conv = check_convergence(rp, s.spec, s.in.y, s.cfg.mode);
    ordered_json conds = ordered_json::array();
    for (const auto &[ell, ok] : conv.conditions) {
        conds.push_back({{"column", rp.column_order[ell] + 1}, {"holds", ok}});
    }
    ordered_json cj = {{"mode", s.cfg.mode == ConvergenceMode::Certified ? "certified" : "extended"},
                       {"ok", conv.ok},
                       {"conditions", conds}};
    if (s.cfg.mode == ConvergenceMode::Extended) {
        cj["smallness"] = format_double(conv.smallness);
        cj["cos_theta"] = format_double(conv.cos_theta);
    }
    rep.results["convergence"] = cj;
    rep.check("convergence", conv.ok, conv.ok ? 0.0 : 1.0, 0.0);
}

void cmd_basis(const Setup &s, const Options &opt, Report &rep)
{
    const ReducedProblem &rp = s.in.rp;
    const BasisData basis = basis_data(rp);
    const RatMatrix As = rp.A_sigma_bar();
    const ConnectionResult conn = connection_solve(basis, As);
    ordered_json omega = ordered_json::array();
    for (const auto &k : basis.omega) {
        omega.push_back(k);
    }
    ordered_json reps = ordered_json::array();
    for (const auto &p : basis.coset_reps) {
        reps.push_back(p);
    }
    ordered_json matrix = ordered_json::array();
    ordered_json exponents = ordered_json::array();
    for (Index r = 0; r < conn.matrix.size(); ++r) {
        ordered_json row = ordered_json::array();
        ordered_json erow = ordered_json::array();
        for (Index c = 0; c < conn.matrix[r].size(); ++c) {
            row.push_back(cjson(conn.matrix[r][c]));
            erow.push_back(to_string(conn.exponent[r][c]));
        }
        matrix.push_back(row);
        exponents.push_back(erow);
    }
    rep.results["omega"] = omega;
    rep.results["coset_representatives"] = reps;
    rep.results["invariant_factors"] = basis.invariant_factors;
    rep.results["connection_matrix"] = matrix;
    rep.results["connection_exponents_over_pi"] = exponents;
    rep.results["determinant"] = cjson(conn.determinant);
    rep.check("connection-determinant", std::abs(conn.determinant) > 1e-8, std::abs(conn.determinant), 1e-8);

    const auto tables = run_indexed<SeriesTable>(basis.omega.size(), opt.jobs, opt.deterministic, [&](std::size_t i) {
        return gevrey_table(basis.omega[i], s.in.beta, As, opt.order);
    });
    ordered_json tj = ordered_json::array();
    for (Index i = 0; i < tables.size(); ++i) {
        tj.push_back(table_json(tables[i]));
        add_csv(rep, "S_k k=" + mi_string(basis.omega[i]), tables[i]);
    }
    rep.results["series"] = tj;
}

void cmd_eval(const Setup &s, const Options &opt, Report &rep)
{
    const ReducedProblem &rp = s.in.rp;
    const ToricProblem &tp = s.file.problem;
    std::vector<HybridReal> arg_sigma;
    for (Index k : tp.sigma) {
        arg_sigma.push_back(tp.x[k].arg_over_pi);
    }
    ordered_json theta = ordered_json::array();
    for (const auto &t : solve_theta(tp.B, tp.sigma, arg_sigma, s.spec.p, s.spec.delta)) {
        theta.push_back(hybrid_json(t));
    }
    rep.results["theta_over_pi"] = theta;
    const EvalResult f = continue_F(rp, s.spec, s.in.beta, s.in.y, s.cfg);
    rep.results["F"] = eval_json(f, rp.column_order);
    rep.results["prefactor"] = cjson(s.in.prefactor);
    rep.results["I"] = {{"value", cjson(s.in.prefactor * f.value)},
                        {"error_estimate", format_double(std::abs(s.in.prefactor) * f.error_estimate)}};
    const double rel = f.error_estimate / std::max(std::abs(f.value), 1e-300);
    rep.check("error-estimate", rel <= opt.tol, rel, opt.tol);
}

void cmd_expand(const Setup &s, const Options &opt, Report &rep)
{
    const ExpansionReport e = expansion_report(s.in.rp, s.spec, s.in.beta, s.in.y, opt.order, s.cfg);
    rep.results["table"] = table_json(e.table);
    add_csv(rep, "A(beta;m,y')/m!", e.table);
    ordered_json rem = ordered_json::array();
    for (Index i = 0; i < e.scales.size(); ++i) {
        rem.push_back({{"scale", format_double(e.scales[i])},
                       {"remainder", format_double(e.remainders[i])},
                       {"quadrature_error", format_double(e.remainder_errors[i])}});
    }
    rep.results["remainders"] = rem;
    rep.results["slope"] = format_double(e.slope);
    rep.results["order"] = opt.order;
    const bool decreasing = e.remainders.back() < e.remainders.front();
    rep.check("remainder-decreases", decreasing, e.remainders.back(), e.remainders.front());
}

void verify_gamma(const Setup &s, const Options &opt, Report &rep)
{
    const Index d = s.in.rp.d();
    const ReducedProblem bare = from_reduced(RatMatrix::identity(d));
    CVec beta = s.in.beta;
    for (auto &b : beta) {
        if (b.real() >= 0.0) {
            b -= std::ceil(b.real() + 0.5);
        }
    }
    const EvalResult f = eval_F(bare, s.spec, beta, {}, s.cfg);
    const Complex a0 = eval_A0(s.spec.p, beta);
    const double rel = std::abs(f.value - a0) / std::abs(a0);
    rep.results["gamma"] = {{"quadrature", cjson(f.value)}, {"closed_form", cjson(a0)}, {"relative", format_double(rel)}};
    rep.check("gamma-identity", rel <= opt.tol, rel, opt.tol);
}

void verify_contiguity(const Setup &s, const Options &opt, Report &rep)
{
    const ResidualReport r = residual_suite(s.in.rp, s.spec, s.in.beta, s.in.y, s.cfg);
    ordered_json cont = ordered_json::array();
    double worst_c = 0.0;
    for (double v : r.contiguity) {
        cont.push_back(format_double(v));
        worst_c = std::max(worst_c, v);
    }
    ordered_json der = ordered_json::array();
    double worst_d = 0.0;
    for (double v : r.derivative) {
        der.push_back(std::isnan(v) ? ordered_json(nullptr) : ordered_json(format_double(v)));
        if (!std::isnan(v)) {
            worst_d = std::max(worst_d, v);
        }
    }
    rep.results["contiguity"] = {{"recurrence", cont}, {"derivative", der}};
    rep.check("contiguity-recurrence", worst_c <= opt.tol, worst_c, opt.tol);
    // Central differences with h = 1e-4 cannot resolve much below 1e-6.
    const double dtol = std::max(opt.tol, 1e-6);
    rep.check("contiguity-derivative", worst_d <= dtol, worst_d, dtol);
}

void verify_continuation(const Setup &s, const Options &opt, Report &rep)
{
    CVec beta = s.in.beta;
    for (auto &b : beta) {
        b += 1.0;
    }
    if (pole_and_resonance(beta, s.in.rp, s.cfg).in_P) {
        rep.results["continuation"] = "skipped: shifted beta lies on the pole set";
        return;
    }
    SolverConfig other = s.cfg;
    other.pivot = PivotRule::LowestIndex;
    other.continuation_margin = 1.0;
    const EvalResult a = continue_F(s.in.rp, s.spec, beta, s.in.y, s.cfg);
    const EvalResult b = continue_F(s.in.rp, s.spec, beta, s.in.y, other);
    const double rel = std::abs(a.value - b.value) / std::max(std::abs(a.value), 1e-300);
    rep.results["continuation"] = {{"max_real_part", cjson(a.value)}, {"lowest_index_margin_1", cjson(b.value)},
                                   {"relative", format_double(rel)}};
    rep.check("continuation-order", rel <= std::max(opt.tol, 1e-7), rel, std::max(opt.tol, 1e-7));
}

void verify_connection(const Setup &s, const Options &opt, Report &rep)
{
    const ReducedProblem &rp = s.in.rp;
    if (rp.n() == rp.d()) {
        return;
    }
    const RatMatrix As = rp.A_sigma_bar();
    const ConnectionResult conn = connection_solve(basis_data(rp), As);
    double worst = 0.0;
    const int order = std::min(opt.order, 4);
    for (Index r = 0; r < conn.reps.size(); ++r) {
        const SeriesTable t = asymptotic_table(rp, conn.reps[r], s.in.beta, order);
        for (const auto &mu : t.support) {
            const Complex want = t.coefficients.at(mu);
            const Complex got = reconstruct_coefficient(conn, r, mu, s.in.beta, As);
            worst = std::max(worst, std::abs(want - got) / std::abs(want));
        }
    }
    rep.results["connection"] = {{"determinant", cjson(conn.determinant)}, {"reconstruction", format_double(worst)}};
    rep.check("connection-reconstruction", worst <= std::max(opt.tol, 1e-9), worst, std::max(opt.tol, 1e-9));
}

void verify_hankel(const Setup &s, const Options &opt, Report &rep)
{
    const ReducedProblem &rp = s.in.rp;
    if (rp.n() == rp.d() || rp.d() > 2) {
        return;
    }
    const HankelReport h = eval_H_upsilon(rp, s.spec, s.in.beta, s.in.y, s.epsilon, s.cfg);
    const HankelReport h2 = eval_H_upsilon(rp, s.spec, s.in.beta, s.in.y, 2.0 * s.epsilon, s.cfg);
    const double tol = std::max(opt.tol, 1e-6);
    if (pole_and_resonance(s.in.beta, rp, s.cfg).resonant) {
        // The factor vanishes, so H itself must vanish for every ε.
        const double worst = std::max(std::abs(h.h.value), std::abs(h2.h.value));
        rep.results["hankel"] = {{"resonant", true}, {"max_abs_H", format_double(worst)}};
        rep.check("hankel-resonant", worst <= tol, worst, tol);
        return;
    }
    const double drift = std::abs(h.h.value - h2.h.value) / std::max(std::abs(h.h.value), 1e-300);
    rep.results["hankel"] = {{"resonant", false},
                             {"relative_gap", format_double(h.relative_gap)},
                             {"epsilon_drift", format_double(drift)}};
    if (h.rhs) {
        rep.check("hankel-identity", h.relative_gap <= tol, h.relative_gap, tol);
    }
    rep.check("hankel-epsilon", drift <= tol, drift, tol);
}

void cmd_verify(const Setup &s, const Options &opt, Report &rep)
{
    const std::map<std::string, std::function<void()>> suites = {
        {"gamma", [&] { verify_gamma(s, opt, rep); }},
        {"contiguity", [&] { verify_contiguity(s, opt, rep); }},
        {"continuation", [&] { verify_continuation(s, opt, rep); }},
        {"connection", [&] { verify_connection(s, opt, rep); }},
        {"hankel", [&] { verify_hankel(s, opt, rep); }},
    };
    if (opt.suite == "all") {
        for (const char *name : {"gamma", "contiguity", "continuation", "connection", "hankel"}) {
            suites.at(name)();
        }
    } else {
        suites.at(opt.suite)();
    }
}

void cmd_hankel(const Setup &s, const Options &opt, Report &rep)
{
    const HankelReport h = eval_H_upsilon(s.in.rp, s.spec, s.in.beta, s.in.y, s.epsilon, s.cfg);
    rep.results["epsilon"] = format_double(s.epsilon);
    rep.results["H"] = eval_json(h.h, s.in.rp.column_order);
    rep.results["hankel_factor"] = cjson(h.hankel_factor);
    rep.results["lhs"] = cjson(h.lhs);
    rep.results["rhs"] = h.rhs ? cjson(*h.rhs) : ordered_json(nullptr);
    rep.results["relative_gap"] = format_double(h.relative_gap);
    const double tol = std::max(opt.tol, 1e-6);
    const bool resonant = pole_and_resonance(s.in.beta, s.in.rp, s.cfg).resonant;
    rep.results["resonant"] = resonant;
    // At resonant β both sides vanish and relative_gap is |lhs|.
    rep.check(resonant || !h.rhs ? "hankel-resonant" : "hankel-identity", h.relative_gap <= tol, h.relative_gap, tol);
}

void write_csv(const std::string &path, const Report &rep)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::InvalidArgument, path + ": cannot write");
    }
    out << "multi_index,re,im,abs\n";
    for (const auto &[label, rows] : rep.csv_tables) {
        for (const auto &[mu, c] : rows) {
            out << '"' << mi_string(mu) << "\"," << format_double(c.real()) << ',' << format_double(c.imag()) << ','
                << format_double(std::abs(c)) << '\n';
        }
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Integral solutions of GKZ systems: evaluation, expansions, connection and verification"};
    Options opt;
    app.add_option("command", opt.command, "check | basis | eval | expand | verify | hankel")
        ->required()
        ->check(CLI::IsMember({"check", "basis", "eval", "expand", "verify", "hankel"}));
    app.add_option("problem", opt.problem, "problem file (JSON, schema gkz-asym/1)")->required();
    app.add_option("--order", opt.order, "series order / expansion length")->check(CLI::Range(0, 64));
    app.add_option("--tol", opt.tol, "pass/fail tolerance")->check(CLI::PositiveNumber);
    app.add_option("--epsilon", opt.epsilon, "radius parameter of the rapid-decay cycle")->check(CLI::PositiveNumber);
    app.add_option("--mode", opt.mode, "certified | extended")->check(CLI::IsMember({"certified", "extended"}));
    app.add_option("--p", opt.p, "cycle index p, comma separated");
    app.add_option("--delta", opt.delta, "auto or comma separated rationals");
    app.add_option("--out", opt.out, "write the JSON report here instead of stdout");
    app.add_option("--csv", opt.csv, "write coefficient tables as CSV");
    app.add_option("--suite", opt.suite, "verify suite")
        ->check(CLI::IsMember({"all", "gamma", "contiguity", "continuation", "connection", "hankel"}));
    app.add_option("--jobs", opt.jobs, "parallel evaluations")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", opt.deterministic, "serial evaluation, no timings in the report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    ordered_json report;
    report["schema"] = kSchema;
    report["command"] = opt.command;
    int code = kPass;
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    try {
        const Setup s = prepare(opt);
        report["inputs"] = {{"problem", problem_to_json(s.file)},
                            {"order", opt.order},
                            {"tol", format_double(opt.tol)},
                            {"epsilon", format_double(s.epsilon)},
                            {"mode", s.cfg.mode == ConvergenceMode::Certified ? "certified" : "extended"},
                            {"suite", opt.suite}};
        report["setup"] = setup_json(s);
        if (opt.command == "check") {
            cmd_check(s, rep);
            if (!rep.checks.empty() && !rep.checks[0]["pass"].get<bool>()) {
                code = kAssumption;
            }
        } else {
            if (!validate_assumption_B(s.file.problem.B, s.file.problem.sigma).ok) {
                throw AssumptionFailure("assumption on B fails; run `check` for details");
            }
            if (opt.command == "basis") {
                cmd_basis(s, opt, rep);
            } else if (opt.command == "eval") {
                cmd_eval(s, opt, rep);
            } else if (opt.command == "expand") {
                cmd_expand(s, opt, rep);
            } else if (opt.command == "verify") {
                cmd_verify(s, opt, rep);
            } else {
                cmd_hankel(s, opt, rep);
            }
        }
        if (code == kPass && !rep.ok) {
            code = kCheckFailed;
        }
        if (!opt.csv.empty()) {
            write_csv(opt.csv, rep);
        }
    } catch (const Error &e) {
        code = exit_code_for(e.kind());
        report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        std::cerr << "gkz-asym: " << e.what() << '\n';
    } catch (const AssumptionFailure &e) {
        code = kAssumption;
        report["error"] = {{"kind", "AssumptionViolation"}, {"message", e.what()}};
        std::cerr << "gkz-asym: " << e.what() << '\n';
    } catch (const std::exception &e) {
        code = kInputError;
        report["error"] = {{"kind", "Internal"}, {"message", e.what()}};
        std::cerr << "gkz-asym: " << e.what() << '\n';
    }
    report["results"] = rep.results;
    report["checks"] = rep.checks;
    report["pass"] = code == kPass;
    report["exit_code"] = code;
    if (!opt.deterministic) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report["timings"] = {{"total_seconds", format_double(secs)}};
    }
    const std::string text = report.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out);
        out << text;
    }
    return code;
}
