#pragma once

#include <stdexcept>
#include <string>

namespace crf {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Topology / construction
struct NonManifold : Error { using Error::Error; };
struct DegenerateFace : Error { using Error::Error; };
struct DanglingVertex : Error { using Error::Error; };

// Length assignments and packings
struct MissingEdgeLength : Error { using Error::Error; };
struct CoincidentVertices : Error { using Error::Error; };
struct MissingRadius : Error { using Error::Error; };
struct MissingAngle : Error { using Error::Error; };
struct AngleOutOfRange : Error { using Error::Error; };
struct NonPositiveScale : Error { using Error::Error; };
struct HyperbolicScaleUnsupported : Error { using Error::Error; };
struct InvalidLengths : Error { using Error::Error; };

// Numerics
struct NumericalDomain : Error { using Error::Error; };
struct DomainExceeded : Error { using Error::Error; };
struct ZeroKappa : Error { using Error::Error; };
struct NoAdmissibleRoot : Error { using Error::Error; };
struct AmbiguousRoot : Error { using Error::Error; };
struct InvalidTriangle : Error { using Error::Error; };
struct SphericalDomain : Error { using Error::Error; };
struct StarTooSmall : Error { using Error::Error; };

// Flow
struct StepUnderflow : Error { using Error::Error; };
struct InitialStateInvalid : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };

// I/O
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace crf
