// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plt {

/// Bad argument or violated precondition (maps to CLI exit code 1).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data: model files, archives, records (CLI exit code 2).
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_ = 0;
};

/// A token (or END) with zero conditional mass was asked to be encoded.
class UnencodableError : public std::runtime_error {
 public:
  UnencodableError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Bitstream is truncated, ambiguous, or never terminates within the depth cap.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// KL divergence requested where the second model has zero mass but the first does not.
class AbsoluteContinuityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plt
