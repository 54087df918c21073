#pragma once

#include <stdexcept>
#include <string>

namespace nqv {

// Root of everything this library throws on bad input or violated contracts.
struct VerifierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator algebra ----------------------------------------------------------

// Tensor factors share a variable.
struct DisjointnessError : VerifierError {
    using VerifierError::VerifierError;
};

// Cylinder extension requested onto a register that does not contain the
// operator's variables.
struct ExtensionError : VerifierError {
    using VerifierError::VerifierError;
};

// A matrix fed to the Hermitian eigensolver is not Hermitian within tolerance.
struct HermiticityError : VerifierError {
    using VerifierError::VerifierError;
};

// A typed wrapper (predicate, density operator, measurement, channel)
// rejected its matrix data.
struct ValidationError : VerifierError {
    using VerifierError::VerifierError;
};

// Surface language ----------------------------------------------------------

struct SyntaxError : VerifierError {
    int line;
    int column;
    SyntaxError(const std::string& what, int line_, int column_)
        : VerifierError(what), line(line_), column(column_) {}
};

struct UnknownName : VerifierError {
    using VerifierError::VerifierError;
};

struct DuplicateName : VerifierError {
    using VerifierError::VerifierError;
};

struct ArityMismatch : VerifierError {
    using VerifierError::VerifierError;
};

struct NotUnitary : VerifierError {
    using VerifierError::VerifierError;
};

struct NotPredicate : VerifierError {
    using VerifierError::VerifierError;
};

struct NotMeasurement : VerifierError {
    using VerifierError::VerifierError;
};

// Semantics / transformers ---------------------------------------------------

// A channel or predicate set outgrew the configured cap.
struct SetExplosionError : VerifierError {
    using VerifierError::VerifierError;
};

// wp requested on a program that still contains a loop.
struct LoopPresentError : VerifierError {
    using VerifierError::VerifierError;
};

// A while statement reached the transformer without an invariant annotation.
struct MissingInvariant : VerifierError {
    using VerifierError::VerifierError;
};

// Operator files -------------------------------------------------------------

struct FormatError : VerifierError {
    using VerifierError::VerifierError;
};

// Decision procedure ----------------------------------------------------------

// A certificate produced by the solver failed its exact re-check. Indicates a
// bug in the solver, never bad user input.
struct InternalCertificateError : VerifierError {
    using VerifierError::VerifierError;
};

}  // namespace nqv
