#include "gkz/geometry.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "gkz/error.hpp"

namespace gkz {

namespace {

Rat sum(const RatVec &v)
{
    Rat s(0);
    for (const auto &x : v) {
        s += x;
    }
    return s;
}

ColumnVerdict judge(Index column, RatVec coords, bool last)
{
    ColumnVerdict v;
    v.column = column;
    v.coordinates = std::move(coords);
    const bool positive =
        std::all_of(v.coordinates.begin(), v.coordinates.end(), [](const Rat &c) { return c > Rat(0); });
    const Rat s = sum(v.coordinates);
    if (!positive) {
        v.ok = false;
        v.reason = last ? "not in the open cone of the simplex" : "not interior to the simplex: a coordinate is <= 0";
    } else if (!last && s >= Rat(1)) {
        v.ok = false;
        v.reason = "not interior to the simplex: barycentric sum " + to_string(s) + " >= 1";
    } else if (last && s <= Rat(1)) {
        v.ok = false;
        v.reason = "inside the simplex: |a(n)| = " + to_string(s) + " <= 1";
    }
    return v;
}

} // namespace

AssumptionDiagnostics validate_assumption_B(const IntMatrix &B, const IndexSet &sigma)
{
    const Index d = B.rows();
    if (sigma.size() != d) {
        throw Error(ErrorKind::InvalidArgument, "sigma must have d entries");
    }
    const RatMatrix Bs = to_rational(B.select_columns(sigma));
    const Rat det = determinant(Bs);
    if (det == 0) {
        throw Error(ErrorKind::SingularSimplex, "det B_sigma = 0");
    }
    IndexSet others;
    for (Index j = 0; j < B.cols(); ++j) {
        if (std::find(sigma.begin(), sigma.end(), j) == sigma.end()) {
            others.push_back(j);
        }
    }
    AssumptionDiagnostics diag;
    for (Index i = 0; i < others.size(); ++i) {
        const Index j = others[i];
        RatVec coords(d);
        for (Index k = 0; k < d; ++k) {
            RatMatrix Mk = Bs;
            for (Index r = 0; r < d; ++r) {
                Mk(r, k) = Rat(B(r, j));
            }
            coords[k] = determinant(Mk) / det;
        }
        diag.columns.push_back(judge(j, std::move(coords), i + 1 == others.size()));
        diag.ok = diag.ok && diag.columns.back().ok;
    }
    return diag;
}

AssumptionDiagnostics validate_assumption_A(const RatMatrix &A)
{
    const Index d = A.rows();
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            if (j >= A.cols() || A(i, j) != Rat(i == j ? 1 : 0)) {
                throw Error(ErrorKind::InvalidArgument, "reduced matrix must start with the identity");
            }
        }
    }
    AssumptionDiagnostics diag;
    for (Index j = d; j < A.cols(); ++j) {
        diag.columns.push_back(judge(j, A.column(j), j + 1 == A.cols()));
        diag.ok = diag.ok && diag.columns.back().ok;
    }
    return diag;
}

namespace {

struct Facet {
    RatVec normal; // outward
    Rat offset;
    std::set<Index> points;
};

Rat dot(const RatVec &a, const RatVec &b)
{
    Rat s(0);
    for (Index i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

RatVec diff(const RatVec &a, const RatVec &b)
{
    RatVec r(a.size());
    for (Index i = 0; i < a.size(); ++i) {
        r[i] = a[i] - b[i];
    }
    return r;
}

// Normal to the affine hull of the chosen points, or nothing if degenerate.
std::optional<RatVec> normal_of(const std::vector<RatVec> &pts, const IndexSet &choice, Index d)
{
    if (d == 1) {
        return RatVec{Rat(1)};
    }
    if (d == 2) {
        const RatVec u = diff(pts[choice[1]], pts[choice[0]]);
        if (u[0] == 0 && u[1] == 0) {
            return std::nullopt;
        }
        return RatVec{-u[1], u[0]};
    }
    const RatVec u = diff(pts[choice[1]], pts[choice[0]]);
    const RatVec v = diff(pts[choice[2]], pts[choice[0]]);
    RatVec w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    if (w[0] == 0 && w[1] == 0 && w[2] == 0) {
        return std::nullopt;
    }
    return w;
}

void for_each_choice(Index n, Index k, IndexSet &current, Index start, const auto &fn)
{
    if (current.size() == k) {
        fn(current);
        return;
    }
    for (Index i = start; i < n; ++i) {
        current.push_back(i);
        for_each_choice(n, k, current, i + 1, fn);
        current.pop_back();
    }
}

std::vector<Facet> facets(const std::vector<RatVec> &pts, Index d)
{
    std::vector<Facet> out;
    std::set<std::set<Index>> seen;
    IndexSet current;
    for_each_choice(pts.size(), d, current, 0, [&](const IndexSet &choice) {
        auto w = normal_of(pts, choice, d);
        if (!w) {
            return;
        }
        Rat c = dot(*w, pts[choice[0]]);
        bool le = true, ge = true;
        std::set<Index> on;
        for (Index m = 0; m < pts.size(); ++m) {
            const Rat s = dot(*w, pts[m]) - c;
            le = le && s <= 0;
            ge = ge && s >= 0;
            if (s == 0) {
                on.insert(m);
            }
        }
        if (!le && !ge) {
            return;
        }
        if (!le) {
            for (auto &x : *w) {
                x = -x;
            }
            c = -c;
        }
        if (seen.insert(on).second) {
            out.push_back({*w, c, on});
        }
    });
    return out;
}

} // namespace

HullBoundary hull_boundary(const RatMatrix &A)
{
    const Index d = A.rows();
    if (d == 0 || d > 3) {
        throw Error(ErrorKind::UnsupportedDimension, "hull_boundary supports 1 <= d <= 3");
    }
    if (rank(A) < d) {
        throw Error(ErrorKind::RankDeficient, "columns of A do not span R^d");
    }
    std::vector<RatVec> pts;
    pts.push_back(RatVec(d, Rat(0)));
    for (Index j = 0; j < A.cols(); ++j) {
        pts.push_back(A.column(j));
    }
    const auto fs = facets(pts, d);

    HullBoundary hb;
    for (Index j = 0; j < A.cols(); ++j) {
        const Index m = j + 1;
        bool on_outer = false;
        std::vector<RatVec> containing;
        for (const auto &f : fs) {
            if (f.points.count(m)) {
                containing.push_back(f.normal);
                on_outer = on_outer || f.offset != 0;
            }
        }
        if (on_outer) {
            hb.tau.push_back(j);
        }
        RatMatrix N(containing.size(), d);
        for (Index r = 0; r < containing.size(); ++r) {
            for (Index c = 0; c < d; ++c) {
                N(r, c) = containing[r][c];
            }
        }
        const bool is_origin = std::all_of(pts[m].begin(), pts[m].end(), [](const Rat &x) { return x == 0; });
        if (!is_origin && !containing.empty() && rank(N) == d) {
            hb.eta.push_back(j);
        }
    }
    return hb;
}

NuDecomposition nu_decomposition(const RatMatrix &A, const IndexSet &eta, Index j)
{
    const Index d = A.rows();
    if (j >= A.cols()) {
        throw Error(ErrorKind::InvalidArgument, "column index out of range");
    }
    const RatVec target = A.column(j);
    std::optional<NuDecomposition> best;
    IndexSet current;
    for (Index size = 1; size <= std::min(d, eta.size()); ++size) {
        for_each_choice(eta.size(), size, current, 0, [&](const IndexSet &choice) {
            IndexSet cols;
            for (Index i : choice) {
                cols.push_back(eta[i]);
            }
            const RatMatrix M = A.select_columns(cols);
            if (rank(M) < size) {
                return;
            }
            // Normal equations; exact because M has full column rank.
            const RatMatrix Mt = M.transpose();
            const RatVec sol = inverse(Mt * M) * (Mt * target);
            if (M * sol != target) {
                return;
            }
            if (std::any_of(sol.begin(), sol.end(), [](const Rat &x) { return x < 0; })) {
                return;
            }
            NuDecomposition cand;
            cand.nu.assign(eta.size(), Rat(0));
            for (Index i = 0; i < choice.size(); ++i) {
                cand.nu[choice[i]] = sol[i];
            }
            cand.kappa = sum(sol);
            if (!best || cand.kappa < best->kappa) {
                best = std::move(cand);
            }
        });
    }
    if (!best) {
        throw Error(ErrorKind::InfeasibleDecomposition,
                    "column " + std::to_string(j + 1) + " is not in the cone of the vertex columns");
    }
    return *best;
}

Rat gevrey_index(const RatMatrix &A)
{
    if (A.cols() == 0) {
        throw Error(ErrorKind::InvalidArgument, "empty matrix");
    }
    return sum(A.column(A.cols() - 1));
}

GeometryReport geometry_report(const RatMatrix &A)
{
    GeometryReport rep;
    rep.assumption = validate_assumption_A(A);
    rep.hull = hull_boundary(A);
    rep.gevrey_index = gevrey_index(A);
    const Index d = A.rows();
    for (Index j = d; j < A.cols(); ++j) {
        if (std::find(rep.hull.eta.begin(), rep.hull.eta.end(), j) == rep.hull.eta.end()) {
            rep.nu.emplace(j, nu_decomposition(A, rep.hull.eta, j));
        }
    }
    return rep;
}

} // namespace gkz
