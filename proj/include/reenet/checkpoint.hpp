// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "reenet/network.hpp"

namespace reenet {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers little-endian):
//   bytes  0..7   magic "REENCKPT"
//   u32           format version
//   u8            head mode (0 recursive, 1 independent)
//   u32 x3        input_dim, num_classes, head_dim
//   u32 + u32[n]  hidden_dims
//   u32 + u32[n]  exit_indices (1-based)
//   u64 + f64[n]  parameters as IEEE-754 bit patterns, layout order
void write_checkpoint(std::ostream& out, const RecursiveEENetwork& net);
[[nodiscard]] RecursiveEENetwork read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const RecursiveEENetwork& net);
[[nodiscard]] RecursiveEENetwork load_checkpoint(const std::filesystem::path& path);

}  // namespace reenet
