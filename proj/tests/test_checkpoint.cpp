// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "reenet/checkpoint.hpp"

using namespace reenet;

namespace {

RecursiveEENetwork sample_net(HeadMode mode) {
  BackboneConfig c;
  c.input_dim = 3;
  c.hidden_dims = {6, 5, 4};
  c.num_classes = 4;
  c.exit_indices = {1, 3};
  c.head_dim = 3;
  return {c, mode, 17};
}

std::string serialise(const RecursiveEENetwork& net) {
  std::ostringstream out(std::ios::binary);
  write_checkpoint(out, net);
  return out.str();
}

RecursiveEENetwork parse(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_checkpoint(in);
}

}  // namespace

TEST_CASE("checkpoints round-trip bit for bit") {
  for (HeadMode mode : {HeadMode::recursive, HeadMode::independent}) {
    const RecursiveEENetwork net = sample_net(mode);
    const RecursiveEENetwork back = parse(serialise(net));
    CHECK(back == net);
    CHECK(back.mode() == mode);
    CHECK(serialise(back) == serialise(net));
  }
}

TEST_CASE("checkpoint files round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "reenet_test_net.ckpt";
  const RecursiveEENetwork net = sample_net(HeadMode::recursive);
  save_checkpoint(path, net);
  CHECK(load_checkpoint(path) == net);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)load_checkpoint(path), CheckpointError);
}

TEST_CASE("damaged checkpoints are rejected") {
  const std::string good = serialise(sample_net(HeadMode::recursive));

  std::string bad = good;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS((void)parse(bad), doctest::Contains("magic"), CheckpointError);

  bad = good;
  bad[8] = 7;  // version field
  CHECK_THROWS_WITH_AS((void)parse(bad), doctest::Contains("version"), CheckpointError);

  bad = good;
  bad[12] = 9;  // head mode
  CHECK_THROWS_AS((void)parse(bad), CheckpointError);

  CHECK_THROWS_WITH_AS((void)parse(good.substr(0, good.size() - 3)), doctest::Contains("truncated"),
                       CheckpointError);

  bad = good;
  bad[13] = 0;  // input_dim = 0 no longer matches the parameter count
  CHECK_THROWS_AS((void)parse(bad), CheckpointError);

  // Hidden-dims list length field sits after mode and three u32 fields.
  bad = good;
  bad[25] = '\x7f';
  bad[26] = '\x7f';
  CHECK_THROWS_WITH_AS((void)parse(bad), doctest::Contains("implausible"), CheckpointError);
}
