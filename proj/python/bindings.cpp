#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gkz/error.hpp"
#include "gkz/io.hpp"
#include "gkz/solver.hpp"

namespace py = pybind11;
using namespace gkz;

namespace {

IntMatrix to_matrix(const std::vector<std::vector<std::int64_t>> &rows)
{
    if (rows.empty() || rows[0].empty()) {
        throw Error(ErrorKind::InvalidArgument, "B must be a non-empty list of rows");
    }
    IntMatrix m(rows.size(), rows[0].size());
    for (Index r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) {
            throw Error(ErrorKind::InvalidArgument, "rows of B must have equal length");
        }
        for (Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

std::vector<Polar> to_polar(const std::vector<Complex> &values)
{
    std::vector<Polar> out;
    for (const Complex &v : values) {
        out.push_back(v == Complex{} ? Polar{} : Polar::from_complex(v));
    }
    return out;
}

std::vector<HybridReal> to_hybrid(const std::vector<double> &values)
{
    std::vector<HybridReal> out;
    for (double v : values) {
        out.push_back(HybridReal::from_double(v));
    }
    return out;
}

CycleSpec make_spec(const ReducedProblem &rp, const IntVec &p, const std::optional<std::vector<double>> &delta,
                    const std::vector<Polar> &y)
{
    if (p.size() != rp.d()) {
        throw Error(ErrorKind::InvalidArgument, "p must have one entry per row of B");
    }
    if (delta) {
        return make_cycle_spec(p, to_hybrid(*delta));
    }
    const HybridReal arg = y.empty() ? HybridReal(Rat(1)) : y.back().arg_over_pi;
    return make_cycle_spec(p, choose_delta(rp.a(rp.n() - 1), p, arg));
}

std::vector<std::vector<std::string>> rational_rows(const RatMatrix &m)
{
    std::vector<std::vector<std::string>> out(m.rows());
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            out[r].push_back(to_string(m(r, c)));
        }
    }
    return out;
}

py::dict result_dict(const EvalResult &r, const CycleSpec &spec)
{
    py::dict d;
    d["value"] = r.value;
    d["error_estimate"] = r.error_estimate;
    d["status"] = r.status;
    std::vector<double> delta;
    for (const auto &h : spec.delta) {
        delta.push_back(h.value());
    }
    d["delta"] = delta;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Asymptotic expansions and integral solutions of GKZ systems";

    static py::exception<Error> error(m, "GkzError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error &e) {
            py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("gamma", static_cast<Complex (*)(Complex)>(&gkz::gamma), py::arg("z"));
    m.def("log_gamma", static_cast<Complex (*)(Complex)>(&gkz::log_gamma), py::arg("z"));

    m.def(
        "reduce",
        [](const std::vector<std::vector<std::int64_t>> &B, const IndexSet &sigma) {
            const ReducedProblem rp = reduce_problem(to_matrix(B), sigma);
            py::dict d;
            d["A"] = rational_rows(rp.A);
            d["q"] = rp.q;
            d["lattice_index"] = rp.lattice_index;
            d["column_order"] = rp.column_order;
            d["gevrey_index"] = to_string(gevrey_index(rp.A));
            return d;
        },
        py::arg("B"), py::arg("sigma"), "A = B_sigma^-1 B with the simplex columns first (0-based sigma).");

    m.def(
        "eval_F",
        [](const std::vector<std::vector<std::int64_t>> &B, const IndexSet &sigma, const CVec &beta,
           const std::vector<Complex> &y, const IntVec &p, const std::optional<std::vector<double>> &delta,
           bool continuation) {
            const ReducedProblem rp = reduce_problem(to_matrix(B), sigma);
            const std::vector<Polar> yp = to_polar(y);
            const CycleSpec spec = make_spec(rp, p, delta, yp);
            const EvalResult r = continuation ? continue_F(rp, spec, beta, yp, {}) : eval_F(rp, spec, beta, yp, {});
            return result_dict(r, spec);
        },
        py::arg("B"), py::arg("sigma"), py::arg("beta"), py::arg("y"), py::arg("p"), py::arg("delta") = py::none(),
        py::arg("continuation") = false,
        "Reduced integral F(beta; y); y holds the reduced coordinates of the columns outside sigma.");

    m.def(
        "eval_I",
        [](const std::vector<std::vector<std::int64_t>> &B, const IndexSet &sigma, const CVec &gamma_,
           const std::vector<Complex> &x, const std::vector<double> &arg_x_sigma, const IntVec &p,
           const std::optional<std::vector<double>> &delta, bool continuation) {
            ToricProblem tp;
            tp.B = to_matrix(B);
            tp.sigma = sigma;
            tp.gamma = gamma_;
            tp.x = to_polar(x);
            if (arg_x_sigma.size() != sigma.size()) {
                throw Error(ErrorKind::InvalidArgument, "one argument (units of pi) per simplex coordinate");
            }
            for (Index i = 0; i < sigma.size(); ++i) {
                if (sigma[i] >= tp.x.size()) {
                    throw Error(ErrorKind::InvalidArgument, "sigma index out of range");
                }
                tp.x[sigma[i]].arg_over_pi = HybridReal::from_double(arg_x_sigma[i]);
            }
            const ReducedInputs in = reduce_inputs(tp);
            const CycleSpec spec = make_spec(in.rp, p, delta, in.y);
            return result_dict(eval_I(tp, spec, {}, continuation), spec);
        },
        py::arg("B"), py::arg("sigma"), py::arg("gamma"), py::arg("x"), py::arg("arg_x_sigma"), py::arg("p"),
        py::arg("delta") = py::none(), py::arg("continuation") = false,
        "Integral over the ray cycle in the original coordinates.");

    m.def(
        "connection",
        [](const std::vector<std::vector<std::int64_t>> &B, const IndexSet &sigma) {
            const ReducedProblem rp = reduce_problem(to_matrix(B), sigma);
            const ConnectionResult c = connection_solve(basis_data(rp), rp.A_sigma_bar());
            py::dict d;
            d["omega"] = c.omega;
            d["reps"] = c.reps;
            d["matrix"] = c.matrix;
            d["determinant"] = c.determinant;
            return d;
        },
        py::arg("B"), py::arg("sigma"), "Phase matrix linking the integral solutions to the Gevrey basis series.");

    m.def(
        "hankel",
        [](const std::vector<std::vector<std::int64_t>> &B, const IndexSet &sigma, const CVec &beta,
           const std::vector<Complex> &y, const IntVec &p, double epsilon,
           const std::optional<std::vector<double>> &delta) {
            const ReducedProblem rp = reduce_problem(to_matrix(B), sigma);
            const std::vector<Polar> yp = to_polar(y);
            const CycleSpec spec = make_spec(rp, p, delta, yp);
            const HankelReport r = eval_H_upsilon(rp, spec, beta, yp, epsilon, {});
            py::dict d;
            d["H"] = r.h.value;
            d["factor"] = r.hankel_factor;
            d["lhs"] = r.lhs;
            d["rhs"] = r.rhs ? py::cast(*r.rhs) : py::none();
            d["relative_gap"] = r.relative_gap;
            return d;
        },
        py::arg("B"), py::arg("sigma"), py::arg("beta"), py::arg("y"), py::arg("p"), py::arg("epsilon") = 0.1,
        py::arg("delta") = py::none(), "Integral over the rapid-decay cycle and the identity it satisfies.");

    m.def(
        "load_problem",
        [](const std::string &path) {
            const ProblemFile pf = load_problem(path);
            py::dict d;
            std::vector<std::vector<std::int64_t>> rows(pf.problem.B.rows());
            for (Index r = 0; r < pf.problem.B.rows(); ++r) {
                for (Index c = 0; c < pf.problem.B.cols(); ++c) {
                    rows[r].push_back(pf.problem.B(r, c));
                }
            }
            d["B"] = rows;
            d["sigma"] = pf.problem.sigma;
            d["gamma"] = pf.problem.gamma;
            std::vector<Complex> x;
            for (const auto &pol : pf.problem.x) {
                x.push_back(pol.value());
            }
            d["x"] = x;
            d["p"] = pf.p ? py::cast(*pf.p) : py::none();
            return d;
        },
        py::arg("path"));
}
