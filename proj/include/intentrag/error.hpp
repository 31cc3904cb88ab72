// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace intentrag {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclass to a process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file content. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// A provider answered, but the answer breaks the agreed contract
/// (wrong dimension, non-finite values, ...). Never retried.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Transport or backend failure of an embedding / LLM provider.
class ProviderError : public Error {
public:
    ProviderError(const std::string& what, bool retryable)
        : Error(what), retryable_(retryable) {}

    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

/// LLM output that could not be parsed into the requested structure.
class GenerationFormatError : public Error {
public:
    GenerationFormatError(const std::string& what, std::string raw_output)
        : Error(what), raw_output_(std::move(raw_output)) {}

    const std::string& raw_output() const noexcept { return raw_output_; }

private:
    std::string raw_output_;
};

class UnsupportedVersionError : public Error {
public:
    using Error::Error;
};

class CorruptionError : public Error {
public:
    using Error::Error;
};

/// A metric whose denominator population is empty.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

} // namespace intentrag
