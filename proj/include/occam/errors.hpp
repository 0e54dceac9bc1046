#pragma once

#include <stdexcept>
#include <string>

namespace occam {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An expected-edge-probability entry left [0, 1]; the model is misconfigured.
class EntryOutOfRange : public Error {
public:
    using Error::Error;
};

/// Matrix handed to sqrt_psd has an eigenvalue below the PSD tolerance.
class NotPsd : public Error {
public:
    using Error::Error;
};

/// Density calibration produced an edge probability above 1.
class DegreeTooLarge : public Error {
public:
    using Error::Error;
};

/// Sparsity estimate is non-positive; the graph cannot be embedded.
class NonpositiveAlpha : public Error {
public:
    using Error::Error;
};

/// All requested leading eigenvalues are non-positive.
class DeficientSpectrum : public Error {
public:
    using Error::Error;
};

/// Center Gram matrix is numerically singular (condition number > 1e12).
class SingularCenters : public Error {
public:
    using Error::Error;
};

/// Fewer points than clusters requested.
class TooFewPoints : public Error {
public:
    using Error::Error;
};

/// Operands have incompatible dimensions.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Overlap profile masses or subsets are malformed.
class InvalidProfile : public Error {
public:
    using Error::Error;
};

/// A text input failed to parse; carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace occam
