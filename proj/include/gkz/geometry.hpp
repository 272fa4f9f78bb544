#pragma once

#include <map>
#include <string>
#include <vector>

#include "gkz/lattice.hpp"

namespace gkz {

struct ColumnVerdict {
    Index column = 0; // 0-based, in the numbering of the input matrix
    bool ok = true;
    std::string reason;
    RatVec coordinates; // barycentric/cone coordinates w.r.t. the simplex
};

struct AssumptionDiagnostics {
    bool ok = true;
    std::vector<ColumnVerdict> columns;
};

// Columns outside σ other than the last must be interior to Δ_σ; the last
// one must lie in the open cone of σ and outside Δ_σ. Checked by Cramer's
// rule on B itself.
AssumptionDiagnostics validate_assumption_B(const IntMatrix &B, const IndexSet &sigma);
// Same test on a reduced matrix, read directly from the columns.
AssumptionDiagnostics validate_assumption_A(const RatMatrix &A);

struct HullBoundary {
    IndexSet eta; // vertices of Δ_A other than the origin
    IndexSet tau; // columns on facets of Δ_A missing the origin
};

// Exact facet enumeration; d ≤ 3.
HullBoundary hull_boundary(const RatMatrix &A);

struct NuDecomposition {
    RatVec nu; // parallel to eta
    Rat kappa;
};

// a(j) = Σ_{ℓ∈η} ν_ℓ a(ℓ), ν ≥ 0, with Σν minimal (ties: first basis found).
NuDecomposition nu_decomposition(const RatMatrix &A, const IndexSet &eta, Index j);

Rat gevrey_index(const RatMatrix &A);

struct GeometryReport {
    HullBoundary hull;
    std::map<Index, NuDecomposition> nu; // j ∉ η ∪ σ
    Rat gevrey_index;
    AssumptionDiagnostics assumption;
};

GeometryReport geometry_report(const RatMatrix &A);

} // namespace gkz
