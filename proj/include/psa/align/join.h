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

#include <span>
#include <string>
#include <vector>

#include "psa/align/dataset.h"
#include "psa/crypto/block.h"
#include "psa/crypto/random.h"
#include "psa/crypto/sharing.h"
#include "psa/perm/permutation.h"

namespace psa::align {

// Matching positions of two PRF lists: y[J[i]] == x[K[i]]. Pairs are in a
// uniformly random order.
struct IndexVectors {
  std::vector<Index> j;
  std::vector<Index> k;

  size_t c() const { return j.size(); }
};

// Throws ProtocolAbort if either list repeats a value.
IndexVectors ComputeIndexVectors(std::span<const Block> x_prf,
                                 std::span<const Block> y_prf,
                                 RandomSource& rng);

struct JoinRow {
  std::string id;
  Bytes u;
  Bytes v;

  auto operator<=>(const JoinRow&) const = default;
};

// Plaintext reference join, sorted by id.
std::vector<JoinRow> PlainInnerJoin(const Dataset& p1, const Dataset& p2);

// One party's output: row i holds its share of u and of v for the same
// joined record.
struct JoinedShares {
  ShareVector u;
  ShareVector v;

  size_t size() const { return u.size(); }
  bool operator==(const JoinedShares&) const = default;
};

struct RevealedRow {
  Bytes u;
  Bytes v;

  auto operator<=>(const RevealedRow&) const = default;
};

// XORs two share tables row by row. Throws InvalidArgument on shape mismatch.
std::vector<RevealedRow> RevealJoin(const JoinedShares& a,
                                    const JoinedShares& b);

// Multiset comparison against the plaintext join projected to (u, v).
bool MatchesJoin(std::vector<RevealedRow> revealed,
                 const std::vector<JoinRow>& expected);

// CSV with header `row,u_share_hex,v_share_hex`.
std::string SharesToCsv(const JoinedShares& s);
JoinedShares ParseSharesCsv(const std::string& text);
void SaveShares(const JoinedShares& s, const std::string& path);
JoinedShares LoadShares(const std::string& path);

// CSV with header `u_hex,v_hex`.
std::string JoinToCsv(const std::vector<RevealedRow>& rows);
std::vector<RevealedRow> ParseJoinCsv(const std::string& text);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& text);

}  // namespace psa::align
