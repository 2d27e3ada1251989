#pragma once

#include <stdexcept>
#include <string>

namespace stegano {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unsupported input (bad Y4M signature, unknown chroma tag,
// bad sidecar magic/version, dimension mismatch).
struct FormatError : Error {
    using Error::Error;
};

// Input ended before the declared payload was complete.
struct TruncationError : FormatError {
    using FormatError::FormatError;
};

// Payload does not fit the cover's embedding capacity.
struct CapacityError : Error {
    using Error::Error;
};

// Wrong password, corrupted ciphertext, or tampered stego data.
struct IntegrityError : Error {
    using Error::Error;
};

// Invalid argument values (odd dimensions, empty password, negative MSE).
struct ArgumentError : Error {
    using Error::Error;
};

// Filesystem-level failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace stegano
