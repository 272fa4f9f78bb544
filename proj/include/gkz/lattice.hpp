#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "gkz/rational.hpp"

namespace gkz {

using IntVec = std::vector<std::int64_t>;
using Index = std::size_t;
using IndexSet = std::vector<Index>;

// Dense row-major matrix; T is std::int64_t or Rat.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix from_rows(const std::vector<std::vector<T>> &rows);
    static Matrix identity(Index n);

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }

    T &operator()(Index i, Index j) { return data_[i * cols_ + j]; }
    const T &operator()(Index i, Index j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(Index j) const;
    std::vector<T> row(Index i) const;
    Matrix transpose() const;
    Matrix select_columns(const IndexSet &cols) const;

    friend bool operator==(const Matrix &a, const Matrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<std::int64_t>;
using RatMatrix = Matrix<Rat>;

RatMatrix to_rational(const IntMatrix &m);
RatMatrix operator*(const RatMatrix &a, const RatMatrix &b);
RatVec operator*(const RatMatrix &a, const RatVec &v);

Index rank(const RatMatrix &m);
Rat determinant(const RatMatrix &m);
// Throws SingularSimplex when m is singular.
RatMatrix inverse(const RatMatrix &m);

// Datum after the toric change of variables: A = B_σ⁻¹B with columns
// reordered so that the simplex comes first.
struct ReducedProblem {
    RatMatrix A;
    IntVec q;                     // per-row lowest common denominators
    std::int64_t lattice_index{}; // |det B_σ|
    IndexSet sigma;               // 0-based columns of the original B
    IndexSet column_order;        // original column of each reduced column
    RatMatrix B_sigma_inverse;    // identity for problems built with from_reduced
    // Integer matrix M with ℤA = M⁻¹ℤ^d; equals B_σ for problems built from B.
    IntMatrix simplex_matrix;

    Index d() const noexcept { return A.rows(); }
    Index n() const noexcept { return A.cols(); }
    RatVec a(Index j) const { return A.column(j); }
    // A restricted to the columns outside the simplex, d × (n−d).
    RatMatrix A_sigma_bar() const;
};

ReducedProblem reduce_problem(const IntMatrix &B, const IndexSet &sigma);
// Wraps an already reduced matrix (first d columns the identity).
ReducedProblem from_reduced(const RatMatrix &A);

struct SmithForm {
    IntMatrix U; // unimodular, U·M·V = D
    IntMatrix V;
    IntMatrix D;
    IntVec invariant_factors;
};

SmithForm smith_normal_form(const IntMatrix &m);
// Lower-triangular Hermite form H with M·ℤ^k = H·ℤ^d (column lattice),
// positive diagonal, off-diagonal entries reduced into [0, H_ii).
IntMatrix hermite_normal_form(const IntMatrix &generators);
// Canonical representative of x modulo the full-rank column lattice of h
// (h in Hermite form): the unique point with 0 ≤ x_i < h_ii.
IntVec reduce_modulo_lattice(IntVec x, const IntMatrix &h);
bool in_column_lattice(const IntVec &x, const IntMatrix &generators);

// Representatives of ℤ^d / ℤ·ᵗM, |det M| of them, lexicographically sorted.
std::vector<IntVec> coset_representatives(const IntMatrix &M);

using MultiIndex = std::vector<std::int64_t>;

// Budget on the number of candidates examined; 0 selects max(10·index·(n−d), 64).
std::vector<MultiIndex> omega_set(const RatMatrix &A_sigma_bar, std::int64_t index,
                                  std::size_t budget = 0);

bool lambda_membership(const MultiIndex &k, const MultiIndex &m, const RatMatrix &A_sigma_bar);

// A_σ̄·k as exact rationals; fractional_part reduces it modulo ℤ^d.
RatVec apply(const RatMatrix &A_sigma_bar, const MultiIndex &k);
RatVec fractional_part(const RatVec &v);

struct BasisData {
    std::vector<MultiIndex> omega;
    std::vector<IntVec> coset_reps;
    IntVec invariant_factors;
};

BasisData basis_data(const ReducedProblem &rp);

} // namespace gkz
