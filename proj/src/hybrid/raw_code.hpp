// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

// Fixed-width raw token code for the residual store.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plt/vocabulary.hpp"

namespace plt::raw {

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v);
std::size_t varint_size(std::uint64_t v);

/// varint(length) then tokens packed MSB-first at `width` bits, zero-padded to a byte.
void put_sequence(std::vector<std::uint8_t>& out, std::span<const Token> seq, unsigned width);
std::size_t sequence_size(std::size_t length, unsigned width);

unsigned ceil_log2(std::uint64_t n);

}  // namespace plt::raw
