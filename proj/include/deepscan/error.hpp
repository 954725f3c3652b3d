// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepscan {

/// Caller passed data that violates an operation's input contract.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition does not hold (e.g. refocusing with no evidence).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class EmptyMaskError : public std::runtime_error {
public:
    EmptyMaskError() : std::runtime_error("mask has no set pixels") {}
};

/// Base for every failure raised by an expert backend.
class ExpertError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "expert"; }
};

/// The backend could not be reached or the request did not complete.
class TransportError : public ExpertError {
public:
    using ExpertError::ExpertError;
    const char* kind() const noexcept override { return "transport"; }
};

/// The backend answered, but the answer violates the wire contract.
class ProtocolError : public ExpertError {
public:
    using ExpertError::ExpertError;
    const char* kind() const noexcept override { return "protocol"; }
};

/// A replay backend was asked for a request it has no fixture for.
class FixtureMissing : public ExpertError {
public:
    using ExpertError::ExpertError;
    const char* kind() const noexcept override { return "fixture"; }
};

class SchemaError : public std::runtime_error {
public:
    SchemaError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace deepscan
