#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Base class for every error the engine raises deliberately.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation point outside the conic domain, or invalid input data.
struct DomainViolation : Error {
    using Error::Error;
};

// det(g) = 0, or the phi' = 0 locus (r s^2 = c m) was hit.
struct DegenerateMetric : Error {
    using Error::Error;
};

// A named closed-form denominator (Q, Theta, Psi, ...) vanished.
struct SingularDenominator : Error {
    SingularDenominator(const std::string& which, const std::string& msg)
        : Error("singular denominator in " + which + ": " + msg), which(which) {}
    std::string which;
};

// Flag-curvature denominator vanished (u parallel to y in the g-sense).
struct DegenerateFlag : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

// Rejection sampling found no admissible directions.
struct EmptyCone : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Exact backend needs integer m, polynomial coefficients and n <= 4.
struct ExactBackendUnavailable : Error {
    using Error::Error;
};

// The radicand c*alpha^2 + r*beta^2 is a perfect square, so w would not be
// a genuine extension element and rationality certificates are meaningless.
struct PerfectSquareRadicand : Error {
    using Error::Error;
};

// Two ExtScalars with different radicands were combined.
struct MixedRadicand : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

// Monomial exponent exceeded the packed-key capacity.
struct OverflowError : Error {
    using Error::Error;
};

// An internal cross-check failed (two routes to one object disagree).
struct ConsistencyError : Error {
    using Error::Error;
};

// A derivative was requested beyond the truncation validity of a jet.
struct OrderExhausted : Error {
    using Error::Error;
};

} // namespace finsler
