#ifndef GTEDGE_ERROR_HPP
#define GTEDGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gtedge {

enum class Errc {
    MassNotOne,
    DensityOutOfRange,
    SupportTooNarrow,
    OverlappingPieces,
    MalformedSpec,
    PointOnSupport,
    NotInR,
    OutOfTrapezoid,
    PointOnSingularSet,
    ConvergenceFailure,
    DegenerateDenominator,
    BoundaryTooClose,
    AmbiguousMultiplicity,
    RowOutOfRange,
    ContourViolation,
    DuplicateSite,
    LengthMismatch,
    TooLarge,
    InvalidTopRow,
    UnknownPreset,
};

const char* errc_name(Errc c);

// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace gtedge

#endif
