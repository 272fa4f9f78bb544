#include "gkz/error.hpp"

namespace gkz {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::SingularSimplex: return "SingularSimplex";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::InfeasibleDecomposition: return "InfeasibleDecomposition";
    case ErrorKind::NoAdmissibleDelta: return "NoAdmissibleDelta";
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::PoleAtNonpositiveInteger: return "PoleAtNonpositiveInteger";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EndpointSingularity: return "EndpointSingularity";
    case ErrorKind::ImplicitSolveFailure: return "ImplicitSolveFailure";
    case ErrorKind::DivergentConfiguration: return "DivergentConfiguration";
    case ErrorKind::ParameterOutOfHalfSpace: return "ParameterOutOfHalfSpace";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::RecursionBudgetExceeded: return "RecursionBudgetExceeded";
    case ErrorKind::NotInSupport: return "NotInSupport";
    case ErrorKind::SingularConnection: return "SingularConnection";
    case ErrorKind::ZeroSimplexCoordinate: return "ZeroSimplexCoordinate";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
    }
    return "Unknown";
}

} // namespace gkz
