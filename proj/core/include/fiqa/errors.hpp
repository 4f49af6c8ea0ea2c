#pragma once

#include <stdexcept>
#include <string>

namespace fiqa {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: unparsable files, invalid specs, mismatched lengths.
// The CLI maps these to exit code 2.
struct InputError : Error {
  using Error::Error;
};

// The requested computation is mathematically undefined on this input
// (e.g. correlation of a constant vector). CLI exit code 3.
struct DegenerateError : Error {
  using Error::Error;
};

struct LengthMismatch : InputError {
  using InputError::InputError;
};
struct DegenerateVariance : DegenerateError {
  using DegenerateError::DegenerateError;
};
struct DuplicateTeam : InputError {
  using InputError::InputError;
};
struct ShapeMismatch : InputError {
  using InputError::InputError;
};
struct NonPositiveDim : InputError {
  using InputError::InputError;
};
struct EmptySeries : InputError {
  using InputError::InputError;
};
struct EmptyBatch : InputError {
  using InputError::InputError;
};
struct EmptyList : InputError {
  using InputError::InputError;
};
struct ScoreOutOfRange : InputError {
  using InputError::InputError;
};
struct AllBinsEmpty : InputError {
  using InputError::InputError;
};
struct CropTooLarge : InputError {
  using InputError::InputError;
};
struct OddDimensions : InputError {
  using InputError::InputError;
};
struct ParseError : InputError {
  using InputError::InputError;
};
struct UnknownKind : InputError {
  using InputError::InputError;
};

}  // namespace fiqa
