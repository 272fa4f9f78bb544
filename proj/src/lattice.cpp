#include "gkz/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "gkz/error.hpp"

namespace gkz {

template <typename T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>> &rows)
{
    if (rows.empty()) {
        return {};
    }
    Matrix m(rows.size(), rows.front().size());
    for (Index i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw Error(ErrorKind::InvalidArgument, "ragged matrix rows");
        }
        for (Index j = 0; j < m.cols_; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

template <typename T>
Matrix<T> Matrix<T>::identity(Index n)
{
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        m(i, i) = T(1);
    }
    return m;
}

template <typename T>
std::vector<T> Matrix<T>::column(Index j) const
{
    std::vector<T> c(rows_);
    for (Index i = 0; i < rows_; ++i) {
        c[i] = (*this)(i, j);
    }
    return c;
}

template <typename T>
std::vector<T> Matrix<T>::row(Index i) const
{
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

template <typename T>
Matrix<T> Matrix<T>::transpose() const
{
    Matrix t(cols_, rows_);
    for (Index i = 0; i < rows_; ++i) {
        for (Index j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

template <typename T>
Matrix<T> Matrix<T>::select_columns(const IndexSet &cols) const
{
    Matrix s(rows_, cols.size());
    for (Index j = 0; j < cols.size(); ++j) {
        if (cols[j] >= cols_) {
            throw Error(ErrorKind::InvalidArgument, "column index out of range");
        }
        for (Index i = 0; i < rows_; ++i) {
            s(i, j) = (*this)(i, cols[j]);
        }
    }
    return s;
}

template class Matrix<std::int64_t>;
template class Matrix<Rat>;

RatMatrix to_rational(const IntMatrix &m)
{
    RatMatrix r(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            r(i, j) = Rat(m(i, j));
        }
    }
    return r;
}

RatMatrix operator*(const RatMatrix &a, const RatMatrix &b)
{
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::InvalidArgument, "matrix product shape mismatch");
    }
    RatMatrix c(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) {
                continue;
            }
            for (Index j = 0; j < b.cols(); ++j) {
                c(i, j) += a(i, k) * b(k, j);
            }
        }
    }
    return c;
}

RatVec operator*(const RatMatrix &a, const RatVec &v)
{
    if (a.cols() != v.size()) {
        throw Error(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
    }
    RatVec out(a.rows(), Rat(0));
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out[i] += a(i, j) * v[j];
        }
    }
    return out;
}

namespace {

// Row echelon form in place; returns the pivot columns and the sign of the
// row permutation applied.
std::pair<IndexSet, int> echelon(RatMatrix &m)
{
    IndexSet pivots;
    int sign = 1;
    Index row = 0;
    for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Index piv = row;
        while (piv < m.rows() && m(piv, col) == 0) {
            ++piv;
        }
        if (piv == m.rows()) {
            continue;
        }
        if (piv != row) {
            for (Index j = 0; j < m.cols(); ++j) {
                std::swap(m(piv, j), m(row, j));
            }
            sign = -sign;
        }
        for (Index i = row + 1; i < m.rows(); ++i) {
            if (m(i, col) == 0) {
                continue;
            }
            const Rat f = m(i, col) / m(row, col);
            for (Index j = col; j < m.cols(); ++j) {
                m(i, j) -= f * m(row, j);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return {pivots, sign};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

IntMatrix to_integer(const RatMatrix &m)
{
    IntMatrix r(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) {
                throw Error(ErrorKind::InvalidArgument, "matrix is not integral");
            }
            r(i, j) = m(i, j).numerator();
        }
    }
    return r;
}

} // namespace

Index rank(const RatMatrix &m)
{
    RatMatrix copy = m;
    return echelon(copy).first.size();
}

Rat determinant(const RatMatrix &m)
{
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
    }
    RatMatrix copy = m;
    auto [pivots, sign] = echelon(copy);
    if (pivots.size() < m.rows()) {
        return Rat(0);
    }
    Rat det(sign);
    for (Index i = 0; i < m.rows(); ++i) {
        det *= copy(i, i);
    }
    return det;
}

RatMatrix inverse(const RatMatrix &m)
{
    const Index n = m.rows();
    if (n != m.cols()) {
        throw Error(ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    }
    RatMatrix aug(n, 2 * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, n + i) = Rat(1);
    }
    for (Index col = 0; col < n; ++col) {
        Index piv = col;
        while (piv < n && aug(piv, col) == 0) {
            ++piv;
        }
        if (piv == n) {
            throw Error(ErrorKind::SingularSimplex, "matrix is singular");
        }
        if (piv != col) {
            for (Index j = 0; j < 2 * n; ++j) {
                std::swap(aug(piv, j), aug(col, j));
            }
        }
        const Rat p = aug(col, col);
        for (Index j = 0; j < 2 * n; ++j) {
            aug(col, j) /= p;
        }
        for (Index i = 0; i < n; ++i) {
            if (i == col || aug(i, col) == 0) {
                continue;
            }
            const Rat f = aug(i, col);
            for (Index j = 0; j < 2 * n; ++j) {
                aug(i, j) -= f * aug(col, j);
            }
        }
    }
    RatMatrix inv(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            inv(i, j) = aug(i, n + j);
        }
    }
    return inv;
}

RatMatrix ReducedProblem::A_sigma_bar() const
{
    IndexSet cols;
    for (Index j = d(); j < n(); ++j) {
        cols.push_back(j);
    }
    return A.select_columns(cols);
}

namespace {

IntVec row_denominators(const RatMatrix &A)
{
    IntVec q(A.rows());
    for (Index k = 0; k < A.rows(); ++k) {
        q[k] = lcm_of_denominators(A.row(k));
    }
    return q;
}

} // namespace

ReducedProblem reduce_problem(const IntMatrix &B, const IndexSet &sigma)
{
    const Index d = B.rows();
    const Index n = B.cols();
    if (d == 0 || sigma.size() != d) {
        throw Error(ErrorKind::InvalidArgument, "sigma must have exactly d = " + std::to_string(d) + " indices");
    }
    std::set<Index> seen;
    for (Index s : sigma) {
        if (s >= n || !seen.insert(s).second) {
            throw Error(ErrorKind::InvalidArgument, "sigma indices must be distinct column indices");
        }
    }
    const RatMatrix Bq = to_rational(B);
    if (rank(Bq) < d) {
        throw Error(ErrorKind::RankDeficient, "rank B < d");
    }
    const IntMatrix Bs = B.select_columns(sigma);
    const Rat det = determinant(to_rational(Bs));
    if (det == 0) {
        throw Error(ErrorKind::SingularSimplex, "det B_sigma = 0");
    }

    // The coset counts below assume ℤB = ℤ^d, so that [ℤA : ℤ^d] = |det B_σ|.
    const IntMatrix H = hermite_normal_form(B);
    std::int64_t covolume = 1;
    for (Index i = 0; i < d; ++i) {
        covolume *= H(i, i);
    }
    if (covolume != 1) {
        throw Error(ErrorKind::InvalidArgument,
                    "columns of B span a sublattice of index " + std::to_string(covolume) + " in Z^d");
    }

    ReducedProblem rp;
    rp.sigma = sigma;
    rp.column_order = sigma;
    for (Index j = 0; j < n; ++j) {
        if (!seen.count(j)) {
            rp.column_order.push_back(j);
        }
    }
    rp.B_sigma_inverse = inverse(to_rational(Bs));
    rp.A = rp.B_sigma_inverse * Bq.select_columns(rp.column_order);
    rp.q = row_denominators(rp.A);
    rp.lattice_index = std::abs(det.numerator());
    rp.simplex_matrix = Bs;
    return rp;
}

ReducedProblem from_reduced(const RatMatrix &A)
{
    const Index d = A.rows();
    if (d == 0 || A.cols() < d) {
        throw Error(ErrorKind::InvalidArgument, "reduced matrix needs at least d columns");
    }
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            if (A(i, j) != Rat(i == j ? 1 : 0)) {
                throw Error(ErrorKind::InvalidArgument, "first d columns of a reduced matrix must be the identity");
            }
        }
    }
    ReducedProblem rp;
    rp.A = A;
    rp.q = row_denominators(A);
    for (Index j = 0; j < A.cols(); ++j) {
        rp.column_order.push_back(j);
        if (j < d) {
            rp.sigma.push_back(j);
        }
    }
    rp.B_sigma_inverse = RatMatrix::identity(d);

    // ℤA = L·ℤ^d with L = H/D, where H is the Hermite form of D·A.
    std::int64_t D = 1;
    for (Index i = 0; i < d; ++i) {
        D = std::lcm(D, lcm_of_denominators(A.row(i)));
    }
    IntMatrix scaled(d, A.cols());
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            scaled(i, j) = (A(i, j) * Rat(D)).numerator();
        }
    }
    const IntMatrix H = hermite_normal_form(scaled);
    RatMatrix L(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            L(i, j) = Rat(H(i, j), D);
        }
    }
    rp.simplex_matrix = to_integer(inverse(L));
    rp.lattice_index = std::abs(determinant(to_rational(rp.simplex_matrix)).numerator());
    return rp;
}

SmithForm smith_normal_form(const IntMatrix &m)
{
    const Index r = m.rows();
    const Index c = m.cols();
    IntMatrix D = m;
    IntMatrix U = IntMatrix::identity(r);
    IntMatrix V = IntMatrix::identity(c);

    auto swap_rows = [&](Index a, Index b) {
        for (Index j = 0; j < c; ++j) {
            std::swap(D(a, j), D(b, j));
        }
        for (Index j = 0; j < r; ++j) {
            std::swap(U(a, j), U(b, j));
        }
    };
    auto swap_cols = [&](Index a, Index b) {
        for (Index i = 0; i < r; ++i) {
            std::swap(D(i, a), D(i, b));
        }
        for (Index i = 0; i < c; ++i) {
            std::swap(V(i, a), V(i, b));
        }
    };
    // row_a += f·row_b
    auto add_row = [&](Index a, Index b, std::int64_t f) {
        for (Index j = 0; j < c; ++j) {
            D(a, j) += f * D(b, j);
        }
        for (Index j = 0; j < r; ++j) {
            U(a, j) += f * U(b, j);
        }
    };
    auto add_col = [&](Index a, Index b, std::int64_t f) {
        for (Index i = 0; i < r; ++i) {
            D(i, a) += f * D(i, b);
        }
        for (Index i = 0; i < c; ++i) {
            V(i, a) += f * V(i, b);
        }
    };

    const Index steps = std::min(r, c);
    for (Index t = 0; t < steps; ++t) {
        while (true) {
            Index pi = r, pj = c;
            std::int64_t best = 0;
            for (Index i = t; i < r; ++i) {
                for (Index j = t; j < c; ++j) {
                    const auto v = std::abs(D(i, j));
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (best == 0) {
                break;
            }
            if (pi != t) {
                swap_rows(pi, t);
            }
            if (pj != t) {
                swap_cols(pj, t);
            }
            bool clean = true;
            for (Index i = t + 1; i < r; ++i) {
                const auto q = floor_div(D(i, t), D(t, t));
                if (q != 0) {
                    add_row(i, t, -q);
                }
                clean = clean && D(i, t) == 0;
            }
            for (Index j = t + 1; j < c; ++j) {
                const auto q = floor_div(D(t, j), D(t, t));
                if (q != 0) {
                    add_col(j, t, -q);
                }
                clean = clean && D(t, j) == 0;
            }
            if (!clean) {
                continue;
            }
            // Divisibility of the remaining block by the pivot.
            bool divisible = true;
            for (Index i = t + 1; i < r && divisible; ++i) {
                for (Index j = t + 1; j < c; ++j) {
                    if (D(i, j) % D(t, t) != 0) {
                        add_row(t, i, 1);
                        divisible = false;
                        break;
                    }
                }
            }
            if (divisible) {
                break;
            }
        }
        if (D(t, t) < 0) {
            for (Index j = 0; j < c; ++j) {
                D(t, j) = -D(t, j);
            }
            for (Index j = 0; j < r; ++j) {
                U(t, j) = -U(t, j);
            }
        }
    }
    SmithForm sf{U, V, D, {}};
    for (Index t = 0; t < steps; ++t) {
        sf.invariant_factors.push_back(D(t, t));
    }
    return sf;
}

IntMatrix hermite_normal_form(const IntMatrix &generators)
{
    IntMatrix G = generators;
    const Index d = G.rows();
    const Index k = G.cols();
    if (k < d) {
        throw Error(ErrorKind::RankDeficient, "fewer generators than the dimension");
    }
    auto col_axpy = [&](Index a, Index b, std::int64_t f) { // col_a += f·col_b
        for (Index i = 0; i < d; ++i) {
            G(i, a) += f * G(i, b);
        }
    };
    auto col_swap = [&](Index a, Index b) {
        for (Index i = 0; i < d; ++i) {
            std::swap(G(i, a), G(i, b));
        }
    };
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < k; ++j) {
            while (G(i, j) != 0) {
                const auto q = G(i, i) / G(i, j);
                col_axpy(i, j, -q);
                col_swap(i, j);
            }
        }
        if (G(i, i) == 0) {
            throw Error(ErrorKind::RankDeficient, "generators do not span a full-rank lattice");
        }
        if (G(i, i) < 0) {
            for (Index r = 0; r < d; ++r) {
                G(r, i) = -G(r, i);
            }
        }
        for (Index j = 0; j < i; ++j) {
            const auto q = floor_div(G(i, j), G(i, i));
            if (q != 0) {
                col_axpy(j, i, -q);
            }
        }
    }
    IntMatrix H(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            H(i, j) = G(i, j);
        }
    }
    return H;
}

IntVec reduce_modulo_lattice(IntVec x, const IntMatrix &h)
{
    for (Index i = 0; i < h.rows(); ++i) {
        const auto t = floor_div(x[i], h(i, i));
        if (t != 0) {
            for (Index r = i; r < h.rows(); ++r) {
                x[r] -= t * h(r, i);
            }
        }
    }
    return x;
}

bool in_column_lattice(const IntVec &x, const IntMatrix &generators)
{
    const auto reduced = reduce_modulo_lattice(x, hermite_normal_form(generators));
    return std::all_of(reduced.begin(), reduced.end(), [](std::int64_t v) { return v == 0; });
}

std::vector<IntVec> coset_representatives(const IntMatrix &M)
{
    if (M.rows() != M.cols() || M.rows() == 0) {
        throw Error(ErrorKind::InvalidArgument, "coset_representatives needs a square matrix");
    }
    const Rat det = determinant(to_rational(M));
    if (det == 0) {
        throw Error(ErrorKind::SingularSimplex, "det M = 0");
    }
    const Index d = M.rows();
    const IntMatrix G = M.transpose();
    const SmithForm sf = smith_normal_form(G);
    // G = U⁻¹·D·V⁻¹, so the lattice is U⁻¹·D·ℤ^d and U⁻¹·c, c in the box
    // ∏[0, D_ii), runs over the quotient.
    const IntMatrix Uinv = to_integer(inverse(to_rational(sf.U)));
    const IntMatrix H = hermite_normal_form(G);

    std::set<IntVec> reps;
    IntVec c(d, 0);
    while (true) {
        IntVec x(d, 0);
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                x[i] += Uinv(i, j) * c[j];
            }
        }
        reps.insert(reduce_modulo_lattice(std::move(x), H));
        Index pos = 0;
        while (pos < d) {
            if (++c[pos] < sf.invariant_factors[pos]) {
                break;
            }
            c[pos] = 0;
            ++pos;
        }
        if (pos == d) {
            break;
        }
    }
    if (static_cast<std::int64_t>(reps.size()) != std::abs(det.numerator())) {
        throw Error(ErrorKind::InvalidArgument, "internal: coset enumeration produced a wrong count");
    }
    return {reps.begin(), reps.end()};
}

RatVec apply(const RatMatrix &A_sigma_bar, const MultiIndex &k)
{
    if (A_sigma_bar.cols() != k.size()) {
        throw Error(ErrorKind::InvalidArgument, "multi-index length does not match A_sigma_bar");
    }
    RatVec out(A_sigma_bar.rows(), Rat(0));
    for (Index i = 0; i < A_sigma_bar.rows(); ++i) {
        for (Index j = 0; j < k.size(); ++j) {
            out[i] += A_sigma_bar(i, j) * Rat(k[j]);
        }
    }
    return out;
}

RatVec fractional_part(const RatVec &v)
{
    RatVec out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        out[i] = v[i] - Rat(floor(v[i]));
    }
    return out;
}

namespace {

// Compositions of `total` into `parts` nonnegative entries, larger leading
// entries first.
void compositions(std::int64_t total, Index parts, MultiIndex &prefix, std::vector<MultiIndex> &out)
{
    if (parts == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (std::int64_t first = total; first >= 0; --first) {
        prefix.push_back(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

struct RatVecLess {
    bool operator()(const RatVec &a, const RatVec &b) const
    {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

} // namespace

std::vector<MultiIndex> omega_set(const RatMatrix &A_sigma_bar, std::int64_t index, std::size_t budget)
{
    if (index <= 0) {
        throw Error(ErrorKind::InvalidArgument, "lattice index must be positive");
    }
    const Index m = A_sigma_bar.cols();
    if (m == 0) {
        if (index != 1) {
            throw Error(ErrorKind::EnumerationBudgetExceeded, "no columns outside the simplex but index > 1");
        }
        return {MultiIndex{}};
    }
    if (budget == 0) {
        budget = std::max<std::size_t>(static_cast<std::size_t>(10 * index) * m, 64);
    }
    std::vector<MultiIndex> omega;
    std::set<RatVec, RatVecLess> seen;
    std::size_t examined = 0;
    for (std::int64_t degree = 0;; ++degree) {
        std::vector<MultiIndex> layer;
        MultiIndex prefix;
        compositions(degree, m, prefix, layer);
        for (const auto &k : layer) {
            if (examined++ >= budget) {
                throw Error(ErrorKind::EnumerationBudgetExceeded,
                            "found " + std::to_string(omega.size()) + " of " + std::to_string(index) +
                                " cosets within the candidate budget");
            }
            if (seen.insert(fractional_part(apply(A_sigma_bar, k))).second) {
                omega.push_back(k);
                if (static_cast<std::int64_t>(omega.size()) == index) {
                    return omega;
                }
            }
        }
    }
}

bool lambda_membership(const MultiIndex &k, const MultiIndex &m, const RatMatrix &A_sigma_bar)
{
    if (k.size() != m.size()) {
        throw Error(ErrorKind::InvalidArgument, "multi-index length mismatch");
    }
    const auto image = apply(A_sigma_bar, m);
    return std::all_of(image.begin(), image.end(), [](const Rat &r) { return is_integer(r); });
}

BasisData basis_data(const ReducedProblem &rp)
{
    BasisData b;
    b.omega = omega_set(rp.A_sigma_bar(), rp.lattice_index);
    b.coset_reps = coset_representatives(rp.simplex_matrix);
    b.invariant_factors = smith_normal_form(rp.simplex_matrix.transpose()).invariant_factors;
    return b;
}

} // namespace gkz
