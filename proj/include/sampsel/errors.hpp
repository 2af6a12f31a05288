// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sampsel {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transport-level failure (connection refused, timeout, non-200 status).
/// Callers may retry.
class RetryableError : public Error {
 public:
  using Error::Error;
};

/// The peer answered, but the payload does not match the wire schema.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A generation run failed after retries were exhausted, or the server
/// reported an error payload.
class RunError : public Error {
 public:
  using Error::Error;
};

/// A candidate with no scorable tokens.
class DegenerateCandidateError : public Error {
 public:
  using Error::Error;
};

/// An entailment predicate (or other pluggable scorer) failed.
class ScorerError : public Error {
 public:
  using Error::Error;
};

/// Invalid combination of configuration values, detected before sampling.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Bad command-line input: unreadable files, malformed datasets or traces.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace sampsel
