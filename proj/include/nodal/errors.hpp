#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph construction
struct DisconnectedGraph : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct ParallelEdge : Error { using Error::Error; };
struct NotATree : Error { using Error::Error; };
struct ZeroSign : Error { using Error::Error; };

// dense spectral
struct ConvergenceFailure : Error { using Error::Error; };
struct DisconnectingCut : Error { using Error::Error; };
struct VanishingEndpoint : Error { using Error::Error; };

// riccati
struct BracketingFailure : Error { using Error::Error; };
struct NonGenericSweep : Error { using Error::Error; };

// metric
struct ScanResolutionFailure : Error { using Error::Error; };
struct DegenerateChoice : Error { using Error::Error; };
struct IdenticallyZeroEdge : Error { using Error::Error; };
struct ZeroAtVertex : Error { using Error::Error; };
struct PoleProximity : Error { using Error::Error; };
struct DirichletForm : Error { using Error::Error; };
struct NoNonzeroCutPoint : Error { using Error::Error; };

// verify
struct PerturbationExhausted : Error { using Error::Error; };

// io
struct ParseError : Error {
    int line;
    ParseError(int line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

} // namespace nodal
