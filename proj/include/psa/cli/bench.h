// Copyright 2026 The psalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psa/crypto/random.h"
#include "psa/net/channel.h"
#include "psa/ot/ot.h"

namespace psa::cli {

enum class BenchTarget { kOsn, kPsi, kPsa };

BenchTarget ParseBenchTarget(std::string_view name);
const char* BenchTargetName(BenchTarget t);

struct BenchOptions {
  ot::OtMode ot_mode = ot::OtMode::kDealer;
  Seed dealer_seed{};
  size_t label_bits = 128;
  size_t attr_width = 16;
  // PSA only.
  int level = 2;
  double alpha = 0.5;
  // 0 means unthrottled in-memory channels.
  double bits_per_second = 0;
};

struct BenchRow {
  BenchTarget target = BenchTarget::kOsn;
  size_t size = 0;
  double bits_per_second = 0;
  size_t c = 0;
  double offline_ms = 0;
  double online_ms = 0;
  double wall_ms = 0;
  // Bytes sent summed over every party.
  uint64_t comm_bytes = 0;
  uint64_t ot_instances = 0;

  double comm_mb() const { return comm_bytes / (1024.0 * 1024.0); }
};

// One switching-network session with a random full permutation of size m.
BenchRow BenchOsn(size_t m, const BenchOptions& opts, RandomSource& rng);
// Server-aided PSI: key agreement, keyed hashing and matching at the server.
BenchRow BenchPsi(size_t n, const BenchOptions& opts, RandomSource& rng);
// Full alignment on generated n x n datasets.
BenchRow BenchPsa(size_t n, const BenchOptions& opts, RandomSource& rng);

BenchRow RunBench(BenchTarget target, size_t size, const BenchOptions& opts,
                  RandomSource& rng);

std::string FormatBenchText(const std::vector<BenchRow>& rows);
std::string FormatBenchCsv(const std::vector<BenchRow>& rows);

}  // namespace psa::cli
