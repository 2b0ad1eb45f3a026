#pragma once

#include <stdexcept>
#include <string>

namespace escher {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polygon input is unusable: too few points, degenerate, or malformed vector layout.
struct InvalidPolygonError : Error {
    using Error::Error;
};

// Polygon is self-intersecting where a simple polygon is required.
struct NonSimplePolygonError : InvalidPolygonError {
    using InvalidPolygonError::InvalidPolygonError;
};

// Malformed goal or weight file.
struct ParseError : Error {
    using Error::Error;
};

// Invalid run configuration (bad flag combinations, out-of-range parameters).
struct ConfigError : Error {
    using Error::Error;
};

// A factorization or eigen solve failed where the contract guarantees success.
struct NumericalError : Error {
    using Error::Error;
};

// Goal vector is (numerically) zero where a nonzero direction is required.
struct DegenerateGoalError : Error {
    using Error::Error;
};

// Requested point count is below the template's minimum.
struct EmptyConfigurationSetError : Error {
    using Error::Error;
};

// No selected template admits any configuration at this point count.
struct EmptySearchError : Error {
    using Error::Error;
};

// Tiling layout requested for a type without placement generators.
struct UnsupportedLayoutError : Error {
    using Error::Error;
};

}  // namespace escher
