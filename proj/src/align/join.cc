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

#include "psa/align/join.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fmt/format.h"
#include "psa/base/exception.h"

namespace psa::align {

IndexVectors ComputeIndexVectors(std::span<const Block> x_prf,
                                 std::span<const Block> y_prf,
                                 RandomSource& rng) {
  std::unordered_map<Block, Index, BlockHash> where;
  where.reserve(x_prf.size());
  for (size_t i = 0; i < x_prf.size(); ++i) {
    if (!where.emplace(x_prf[i], static_cast<Index>(i)).second) {
      PSA_THROW(ProtocolAbort, "PRF collision inside the first list at {}", i);
    }
  }
  IndexVectors iv;
  std::unordered_map<Block, Index, BlockHash> seen_y;
  seen_y.reserve(y_prf.size());
  for (size_t j = 0; j < y_prf.size(); ++j) {
    if (!seen_y.emplace(y_prf[j], static_cast<Index>(j)).second) {
      PSA_THROW(ProtocolAbort, "PRF collision inside the second list at {}",
                j);
    }
    auto it = where.find(y_prf[j]);
    if (it != where.end()) {
      iv.j.push_back(static_cast<Index>(j));
      iv.k.push_back(it->second);
    }
  }
  if (iv.c() > 1) {
    auto sigma = RandomPermutation(iv.c(), rng);
    IndexVectors shuffled;
    shuffled.j.resize(iv.c());
    shuffled.k.resize(iv.c());
    for (size_t i = 0; i < iv.c(); ++i) {
      shuffled.j[i] = iv.j[sigma[i]];
      shuffled.k[i] = iv.k[sigma[i]];
    }
    return shuffled;
  }
  return iv;
}

std::vector<JoinRow> PlainInnerJoin(const Dataset& p1, const Dataset& p2) {
  std::unordered_map<std::string_view, size_t> index;
  for (size_t i = 0; i < p2.size(); ++i) index.emplace(p2[i].id, i);
  std::vector<JoinRow> rows;
  for (const auto& r : p1.records()) {
    auto it = index.find(r.id);
    if (it != index.end()) rows.push_back({r.id, r.attr, p2[it->second].attr});
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<RevealedRow> RevealJoin(const JoinedShares& a,
                                    const JoinedShares& b) {
  ShareVector u = Reveal(a.u, b.u);
  ShareVector v = Reveal(a.v, b.v);
  PSA_ENFORCE(u.size() == v.size(), "u has {} rows but v has {}", u.size(),
              v.size());
  std::vector<RevealedRow> rows(u.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].u.assign(u.Row(i).begin(), u.Row(i).end());
    rows[i].v.assign(v.Row(i).begin(), v.Row(i).end());
  }
  return rows;
}

bool MatchesJoin(std::vector<RevealedRow> revealed,
                 const std::vector<JoinRow>& expected) {
  std::vector<RevealedRow> want;
  want.reserve(expected.size());
  for (const auto& r : expected) want.push_back({r.u, r.v});
  std::sort(revealed.begin(), revealed.end());
  std::sort(want.begin(), want.end());
  return revealed == want;
}

namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Calls f(fields, lineno) for every non-empty line after the header.
template <typename F>
void ForEachCsvRow(const std::string& text, std::string_view header,
                   size_t fields, F&& f) {
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      PSA_ENFORCE(line == header, "line 1: expected header '{}'", header);
      seen_header = true;
      continue;
    }
    auto parts = SplitFields(line);
    PSA_ENFORCE(parts.size() == fields, "line {}: expected {} fields", lineno,
                fields);
    f(parts, lineno);
  }
  PSA_ENFORCE(seen_header, "missing header '{}'", header);
}

}  // namespace

std::string SharesToCsv(const JoinedShares& s) {
  std::string out = "row,u_share_hex,v_share_hex\n";
  for (size_t i = 0; i < s.size(); ++i) {
    out += fmt::format("{},{},{}\n", i, ToHex(s.u.Row(i)), ToHex(s.v.Row(i)));
  }
  return out;
}

JoinedShares ParseSharesCsv(const std::string& text) {
  std::vector<Bytes> us, vs;
  ForEachCsvRow(text, "row,u_share_hex,v_share_hex", 3,
                [&](const std::vector<std::string>& f, size_t lineno) {
                  PSA_ENFORCE(f[0] == std::to_string(us.size()),
                              "line {}: row index out of sequence", lineno);
                  us.push_back(FromHex(f[1]));
                  vs.push_back(FromHex(f[2]));
                });
  JoinedShares s;
  s.u = ShareVector(us.empty() ? 0 : us[0].size(), 0);
  s.v = ShareVector(vs.empty() ? 0 : vs[0].size(), 0);
  for (size_t i = 0; i < us.size(); ++i) {
    PSA_ENFORCE(us[i].size() == s.u.width() && vs[i].size() == s.v.width(),
                "row {}: share width differs from row 0", i);
    s.u.Append(us[i]);
    s.v.Append(vs[i]);
  }
  return s;
}

std::string JoinToCsv(const std::vector<RevealedRow>& rows) {
  std::string out = "u_hex,v_hex\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{}\n", ToHex(r.u), ToHex(r.v));
  }
  return out;
}

std::vector<RevealedRow> ParseJoinCsv(const std::string& text) {
  std::vector<RevealedRow> rows;
  ForEachCsvRow(text, "u_hex,v_hex", 2,
                [&](const std::vector<std::string>& f, size_t) {
                  rows.push_back({FromHex(f[0]), FromHex(f[1])});
                });
  return rows;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  PSA_ENFORCE(f.good(), "cannot open '{}'", path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  PSA_ENFORCE(f.good(), "cannot write '{}'", path);
  f << text;
}

void SaveShares(const JoinedShares& s, const std::string& path) {
  WriteFile(path, SharesToCsv(s));
}

JoinedShares LoadShares(const std::string& path) {
  return ParseSharesCsv(ReadFile(path));
}

}  // namespace psa::align
