// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nrl2sm {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// MCS table or index outside the valid range. Indices are rejected, never clamped.
class InvalidMcsError : public Error {
  public:
    using Error::Error;
};

/// A value violates an operation precondition (empty spectrum, negative SINR,
/// BLER outside [0,1], non-positive bit counts, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// HARQ combining shape mismatch: RB count differs from the stored history,
/// or the MCS differs from the one frozen at the first transmission.
class CombiningError : public Error {
  public:
    using Error::Error;
};

/// No SINR-BLER curve family stored for the requested (table, MCS) key.
class MissingCurveError : public Error {
  public:
    using Error::Error;
};

/// Transport block size beyond the configured segmentation cap.
class UnsupportedSizeError : public Error {
  public:
    using Error::Error;
};

/// Structured-text file violates its schema; the message names the offending key.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// LUT or ensemble generation asked for grids that cannot satisfy the output invariants.
class GenerationError : public Error {
  public:
    using Error::Error;
};

/// The calibration objective was non-finite over the whole search range.
class CalibrationError : public Error {
  public:
    using Error::Error;
};

/// Simulation configuration rejected (zero allocation, bad counts, ...).
class InvalidConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace nrl2sm
