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

#include "psa/align/protocol.h"
#include "psa/crypto/random.h"

namespace psa::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAbort = 2;
inline constexpr int kExitVerifyFailed = 3;

enum class Role { kP1, kP2, kServer };

Role ParseRole(std::string_view name);
const char* RoleName(Role r);

// Everything `run` needs. For each link the first-named party listens and
// the other connects: P1 listens on p1p2, the server listens on p1_server and
// p2_server.
struct RunConfig {
  Role role = Role::kP1;
  int level = 2;
  std::string p1p2;
  std::string p1_server;
  std::string p2_server;
  std::string dataset;
  std::optional<size_t> attr_width;
  size_t label_bits = 128;
  ot::OtMode ot_mode = ot::OtMode::kDealer;
  std::optional<std::string> dealer_seed;
  std::optional<std::string> seed;
  bool test_mode = false;
  double bits_per_second = 0;
  bool concurrent = false;
  std::string shares_out;
  std::string intersection_out;
  std::string stats_out;
  int connect_timeout_ms = 30000;

  // Throws InvalidArgument describing the first inconsistency.
  void Validate() const;
};

// 64 hex digits are taken verbatim; any other string is hashed.
Seed ParseSeed(const std::string& text);
// Accepts "1024" and "2^10".
size_t ParseSize(const std::string& text);
// Bits per second; accepts "1e9", "500M", "10G", "200Mbit", "0".
double ParseBandwidth(const std::string& text);

// JSON report printed by `run`.
std::string StatsJson(Role role, int level, const align::PartyReport& r,
                      const std::string& intersection_file);

// Executes one party of the protocol and writes its outputs.
int CmdRun(const RunConfig& cfg);

// Entry point for the command-line tool.
int Main(int argc, char** argv);

}  // namespace psa::cli
