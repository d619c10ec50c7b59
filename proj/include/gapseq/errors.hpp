#pragma once

#include <stdexcept>
#include <string>

namespace gapseq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// support_gcd: doubling the truncated scan changed the gcd.
struct UnstableGcdError : Error {
    using Error::Error;
};

// generate: cumulative weight would exceed the 64-bit width.
struct HorizonOverflowError : Error {
    using Error::Error;
};

// density/vault: query point beyond the generated horizon.
struct OutOfWindowError : Error {
    using Error::Error;
};

// vault: fewer than b gaps before the vaulting index.
struct TooFewGapsError : Error {
    using Error::Error;
};

// stamp bounds: generators must be coprime.
struct NotCoprimeError : Error {
    using Error::Error;
};

// coverage report: window extends past the table horizon.
struct WindowExceedsHorizonError : Error {
    using Error::Error;
};

// experiment config failed validation; diagnostics carried in message.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace gapseq
