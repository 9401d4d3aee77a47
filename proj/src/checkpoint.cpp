// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace reenet {
namespace {

constexpr std::array<char, 8> kMagic = {'R', 'E', 'E', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint64_t kMaxParameters = std::uint64_t{1} << 32;

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw CheckpointError("truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

void put_list(std::ostream& out, const std::vector<std::size_t>& values) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(values.size()));
  for (std::size_t v : values) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(v));
  }
}

std::vector<std::size_t> get_list(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > 4096) {
    throw CheckpointError("implausible list length in checkpoint header");
  }
  std::vector<std::size_t> values(n);
  for (auto& v : values) {
    v = get<std::uint32_t>(in);
  }
  return values;
}

}  // namespace

void write_checkpoint(std::ostream& out, const RecursiveEENetwork& net) {
  const BackboneConfig& cfg = net.config();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(net.mode()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.input_dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.num_classes));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.head_dim));
  put_list(out, cfg.hidden_dims);
  put_list(out, cfg.exit_indices);
  const auto params = net.parameters();
  put<std::uint64_t>(out, params.size());
  for (double p : params) {
    put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
  }
  if (!out) {
    throw CheckpointError("failed to write checkpoint");
  }
}

RecursiveEENetwork read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw CheckpointError("not a reenet checkpoint (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto mode_byte = get<std::uint8_t>(in);
  if (mode_byte > 1) {
    throw CheckpointError("unknown head mode in checkpoint");
  }
  BackboneConfig cfg;
  cfg.input_dim = get<std::uint32_t>(in);
  cfg.num_classes = get<std::uint32_t>(in);
  cfg.head_dim = get<std::uint32_t>(in);
  cfg.hidden_dims = get_list(in);
  cfg.exit_indices = get_list(in);
  const auto count = get<std::uint64_t>(in);
  if (count > kMaxParameters) {
    throw CheckpointError("implausible parameter count in checkpoint");
  }
  std::vector<double> params(count);
  for (double& p : params) {
    p = std::bit_cast<double>(get<std::uint64_t>(in));
  }
  try {
    return RecursiveEENetwork(cfg, static_cast<HeadMode>(mode_byte), std::move(params));
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("invalid checkpoint header: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const RecursiveEENetwork& net) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CheckpointError("cannot open " + path.string() + " for writing");
  }
  write_checkpoint(out, net);
}

RecursiveEENetwork load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError("cannot open " + path.string());
  }
  return read_checkpoint(in);
}

}  // namespace reenet
