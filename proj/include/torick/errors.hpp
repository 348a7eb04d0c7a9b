// Error taxonomy shared by the whole library. The CLI maps these onto its
// exit-code contract (schema = 2, precondition = 3, mismatch = 4).
#pragma once

#include <stdexcept>
#include <string>

namespace torick {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files / JSON that does not match the documented schemas.
struct SchemaError : Error {
    using Error::Error;
};

// Violated mathematical precondition (non-nef polarization, wrong dimension,
// incompatible fans, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// Sum/product of values living in different rings.
struct IncompatibleBaseError : PreconditionError {
    using PreconditionError::PreconditionError;
};

// A consistency check that was requested explicitly failed.
struct MismatchError : Error {
    using Error::Error;
};

}  // namespace torick
