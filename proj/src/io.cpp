#include "gkz/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gkz/error.hpp"

namespace gkz {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string &text, const std::string &field)
{
    const char *begin = text.c_str();
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw Error(ErrorKind::ParseError, field + ": not a number: '" + text + "'");
    }
    return v;
}

namespace {

[[noreturn]] void fail(const std::string &field, const std::string &what)
{
    throw Error(ErrorKind::ParseError, field + ": " + what);
}

double number(const json &j, const std::string &field)
{
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return parse_double(j.get<std::string>(), field);
    }
    fail(field, "expected a number or a numeric string");
}

std::int64_t integer(const json &j, const std::string &field)
{
    if (j.is_number_integer()) {
        return j.get<std::int64_t>();
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char *end = nullptr;
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (!s.empty() && *end == '\0') {
            return v;
        }
    }
    fail(field, "expected an integer");
}

HybridReal hybrid(const json &exact, const json *rest, const std::string &field)
{
    HybridReal h;
    if (exact.is_number_integer()) {
        h.exact = Rat(exact.get<std::int64_t>());
    } else if (exact.is_string()) {
        try {
            h.exact = parse_rational(exact.get<std::string>());
        } catch (const Error &) {
            h.rest = parse_double(exact.get<std::string>(), field);
        }
    } else if (exact.is_number()) {
        h.rest = exact.get<double>();
    } else {
        fail(field, "expected a rational string");
    }
    if (rest) {
        h.rest += number(*rest, field + "_rest");
    }
    return h;
}

void hybrid_to_json(ordered_json &out, const std::string &key, const HybridReal &h)
{
    out[key] = to_string(h.exact);
    if (h.rest != 0.0) {
        out[key + "_rest"] = format_double(h.rest);
    }
}

Complex complex_from(const json &j, const std::string &field)
{
    if (!j.is_object() || !j.contains("re")) {
        fail(field, "expected {\"re\": ..., \"im\": ...}");
    }
    const double im = j.contains("im") ? number(j["im"], field + ".im") : 0.0;
    return {number(j["re"], field + ".re"), im};
}

const json &require(const json &j, const char *key)
{
    if (!j.contains(key)) {
        fail(key, "missing field");
    }
    return j[key];
}

} // namespace

ordered_json complex_to_json(Complex c)
{
    ordered_json j;
    j["re"] = format_double(c.real());
    j["im"] = format_double(c.imag());
    return j;
}

ordered_json problem_to_json(const ProblemFile &pf)
{
    const ToricProblem &tp = pf.problem;
    ordered_json j;
    j["schema"] = kSchema;
    ordered_json B = ordered_json::array();
    for (Index r = 0; r < tp.B.rows(); ++r) {
        B.push_back(tp.B.row(r));
    }
    j["B"] = B;
    ordered_json sigma = ordered_json::array();
    for (Index s : tp.sigma) {
        sigma.push_back(s + 1);
    }
    j["sigma"] = sigma;
    ordered_json gamma = ordered_json::array();
    for (const auto &g : tp.gamma) {
        gamma.push_back(complex_to_json(g));
    }
    j["gamma"] = gamma;
    ordered_json x = ordered_json::array();
    for (const auto &xi : tp.x) {
        ordered_json e = complex_to_json(xi.value());
        e["abs"] = format_double(xi.abs);
        hybrid_to_json(e, "arg_over_pi", xi.arg_over_pi);
        x.push_back(e);
    }
    j["x"] = x;
    if (pf.p) {
        j["p"] = *pf.p;
    }
    if (pf.delta) {
        ordered_json d = ordered_json::array();
        for (const auto &h : *pf.delta) {
            ordered_json e;
            hybrid_to_json(e, "value", h);
            d.push_back(e.size() == 1 ? e["value"] : e);
        }
        j["delta"] = d;
    }
    if (pf.epsilon) {
        j["epsilon"] = format_double(*pf.epsilon);
    }
    if (pf.rel_tol || pf.abs_tol) {
        ordered_json t;
        if (pf.rel_tol) {
            t["rel"] = format_double(*pf.rel_tol);
        }
        if (pf.abs_tol) {
            t["abs"] = format_double(*pf.abs_tol);
        }
        j["tolerances"] = t;
    }
    if (pf.mode) {
        j["mode"] = *pf.mode;
    }
    return j;
}

ProblemFile problem_from_json(const json &j)
{
    if (!j.is_object()) {
        fail("<root>", "expected an object");
    }
    const json &schema = require(j, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kSchema) {
        throw Error(ErrorKind::SchemaVersionMismatch,
                    "expected schema '" + std::string(kSchema) + "', got " + schema.dump());
    }
    ProblemFile pf;
    ToricProblem &tp = pf.problem;

    const json &B = require(j, "B");
    if (!B.is_array() || B.empty() || !B[0].is_array() || B[0].empty()) {
        fail("B", "expected a non-empty array of rows");
    }
    const Index d = B.size();
    const Index n = B[0].size();
    tp.B = IntMatrix(d, n);
    for (Index r = 0; r < d; ++r) {
        if (!B[r].is_array() || B[r].size() != n) {
            fail("B[" + std::to_string(r) + "]", "rows must all have " + std::to_string(n) + " entries");
        }
        for (Index c = 0; c < n; ++c) {
            if (!B[r][c].is_number_integer()) {
                fail("B[" + std::to_string(r) + "][" + std::to_string(c) + "]", "entries must be integers");
            }
            tp.B(r, c) = B[r][c].get<std::int64_t>();
        }
    }

    const json &sigma = require(j, "sigma");
    if (!sigma.is_array() || sigma.size() != d) {
        fail("sigma", "expected " + std::to_string(d) + " column indices (1-based)");
    }
    std::set<Index> seen;
    for (Index i = 0; i < d; ++i) {
        const std::int64_t s = integer(sigma[i], "sigma[" + std::to_string(i) + "]");
        if (s < 1 || s > static_cast<std::int64_t>(n) || !seen.insert(static_cast<Index>(s - 1)).second) {
            fail("sigma[" + std::to_string(i) + "]", "must be distinct column indices in 1.." + std::to_string(n));
        }
        tp.sigma.push_back(static_cast<Index>(s - 1));
    }

    const json &gamma = require(j, "gamma");
    if (!gamma.is_array() || gamma.size() != d) {
        fail("gamma", "expected " + std::to_string(d) + " complex entries");
    }
    for (Index i = 0; i < d; ++i) {
        tp.gamma.push_back(complex_from(gamma[i], "gamma[" + std::to_string(i) + "]"));
    }

    const json &x = require(j, "x");
    if (!x.is_array() || x.size() != n) {
        fail("x", "expected " + std::to_string(n) + " complex entries");
    }
    for (Index i = 0; i < n; ++i) {
        const std::string field = "x[" + std::to_string(i) + "]";
        const Complex c = complex_from(x[i], field);
        const bool in_sigma = seen.count(i) > 0;
        if (in_sigma && c == Complex{}) {
            fail(field, "coordinates of the simplex must be nonzero");
        }
        Polar pol;
        if (x[i].contains("arg_over_pi")) {
            const json *rest = x[i].contains("arg_over_pi_rest") ? &x[i]["arg_over_pi_rest"] : nullptr;
            pol.arg_over_pi = hybrid(x[i]["arg_over_pi"], rest, field + ".arg_over_pi");
            pol.abs = x[i].contains("abs") ? number(x[i]["abs"], field + ".abs") : std::abs(c);
            const Complex back = pol.value();
            if (std::abs(back - c) > 1e-12 * std::max(1.0, std::abs(c))) {
                fail(field, "arg_over_pi is inconsistent with re/im");
            }
        } else if (in_sigma) {
            fail(field, "arg_over_pi is required for coordinates of the simplex");
        } else {
            pol = Polar::from_complex(c);
        }
        tp.x.push_back(pol);
    }

    if (j.contains("p")) {
        const json &p = j["p"];
        if (!p.is_array() || p.size() != d) {
            fail("p", "expected " + std::to_string(d) + " integers");
        }
        IntVec pv;
        for (Index i = 0; i < d; ++i) {
            pv.push_back(integer(p[i], "p[" + std::to_string(i) + "]"));
        }
        pf.p = pv;
    }
    if (j.contains("delta")) {
        const json &dl = j["delta"];
        if (dl.is_string() && dl.get<std::string>() == "auto") {
            pf.delta.reset();
        } else if (dl.is_array() && dl.size() == d) {
            std::vector<HybridReal> dv;
            for (Index i = 0; i < d; ++i) {
                const std::string field = "delta[" + std::to_string(i) + "]";
                if (dl[i].is_object()) {
                    const json *rest = dl[i].contains("value_rest") ? &dl[i]["value_rest"] : nullptr;
                    dv.push_back(hybrid(require(dl[i], "value"), rest, field));
                } else {
                    dv.push_back(hybrid(dl[i], nullptr, field));
                }
            }
            pf.delta = dv;
        } else {
            fail("delta", "expected \"auto\" or " + std::to_string(d) + " rationals");
        }
    }
    if (j.contains("epsilon")) {
        pf.epsilon = number(j["epsilon"], "epsilon");
    }
    if (j.contains("tolerances")) {
        const json &t = j["tolerances"];
        if (t.contains("rel")) {
            pf.rel_tol = number(t["rel"], "tolerances.rel");
        }
        if (t.contains("abs")) {
            pf.abs_tol = number(t["abs"], "tolerances.abs");
        }
    }
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) {
            fail("mode", "expected \"certified\" or \"extended\"");
        }
        pf.mode = j["mode"].get<std::string>();
        if (*pf.mode != "certified" && *pf.mode != "extended") {
            fail("mode", "expected \"certified\" or \"extended\"");
        }
    }
    return pf;
}

ProblemFile load_problem(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, path + ": cannot open");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    try {
        return problem_from_json(j);
    } catch (const Error &e) {
        throw Error(e.kind(), path + ": " + std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2));
    }
}

void save_problem(const std::string &path, const ProblemFile &pf)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::InvalidArgument, path + ": cannot write");
    }
    out << problem_to_json(pf).dump(2) << '\n';
}

bool same_problem(const ToricProblem &a, const ToricProblem &b)
{
    if (!(a.B == b.B) || a.sigma != b.sigma || a.gamma != b.gamma || a.x.size() != b.x.size()) {
        return false;
    }
    for (Index i = 0; i < a.x.size(); ++i) {
        if (a.x[i].abs != b.x[i].abs || !(a.x[i].arg_over_pi == b.x[i].arg_over_pi)) {
            return false;
        }
    }
    return true;
}

} // namespace gkz
