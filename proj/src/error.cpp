#include <gtedge/error.hpp>

namespace gtedge {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::MassNotOne: return "MassNotOne";
    case Errc::DensityOutOfRange: return "DensityOutOfRange";
    case Errc::SupportTooNarrow: return "SupportTooNarrow";
    case Errc::OverlappingPieces: return "OverlappingPieces";
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::PointOnSupport: return "PointOnSupport";
    case Errc::NotInR: return "NotInR";
    case Errc::OutOfTrapezoid: return "OutOfTrapezoid";
    case Errc::PointOnSingularSet: return "PointOnSingularSet";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::BoundaryTooClose: return "BoundaryTooClose";
    case Errc::AmbiguousMultiplicity: return "AmbiguousMultiplicity";
    case Errc::RowOutOfRange: return "RowOutOfRange";
    case Errc::ContourViolation: return "ContourViolation";
    case Errc::DuplicateSite: return "DuplicateSite";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InvalidTopRow: return "InvalidTopRow";
    case Errc::UnknownPreset: return "UnknownPreset";
    }
    return "Unknown";
}

} // namespace gtedge
