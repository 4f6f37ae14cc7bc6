#pragma once

#include <stdexcept>
#include <string>

namespace qloss {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or invalid user input (files, flags, out-of-contract arguments).
// The CLI maps these to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

// A fit reached a state that has no physical interpretation.
class FitError : public Error {
public:
    using Error::Error;
};

struct ValidationError : InputError { using InputError::InputError; };

// model / fit
struct NonPhysicalFit : FitError { using FitError::FitError; };
struct NoResonance : FitError { using FitError::FitError; };
struct InsufficientWings : InputError { using InputError::InputError; };
struct DegenerateGeometry : FitError { using FitError::FitError; };
struct InsufficientData : InputError { using InputError::InputError; };

// designer
struct Unreachable : InputError { using InputError::InputError; };
struct EmptyBand : InputError { using InputError::InputError; };

// synth
struct GridTooNarrow : InputError { using InputError::InputError; };

// io
struct MalformedOptionLine : InputError { using InputError::InputError; };
struct UnsupportedFormat : InputError { using InputError::InputError; };
struct RowArityError : InputError { using InputError::InputError; };
struct MissingHeader : InputError { using InputError::InputError; };
struct NonPositiveValue : InputError { using InputError::InputError; };

}  // namespace qloss
