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

#include "psa/align/dataset.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fmt/format.h"
#include "psa/base/exception.h"
#include "psa/perm/permutation.h"

namespace psa::align {

Dataset::Dataset(std::vector<Record> records, size_t attr_width)
    : records_(std::move(records)), attr_width_(attr_width) {
  PSA_ENFORCE(records_.empty() || attr_width_ > 0,
              "attributes must be at least one byte wide");
  std::unordered_set<std::string_view> seen;
  seen.reserve(records_.size());
  for (size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    PSA_ENFORCE(!r.id.empty() && r.id.size() <= kMaxIdBytes,
                "record {}: id must be 1..{} bytes", i, kMaxIdBytes);
    PSA_ENFORCE(r.attr.size() == attr_width_,
                "record {}: attribute has {} bytes, expected {}", i,
                r.attr.size(), attr_width_);
    PSA_ENFORCE(seen.insert(r.id).second, "duplicate id '{}'", r.id);
  }
}

std::vector<Bytes> Dataset::IdBytes() const {
  std::vector<Bytes> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.emplace_back(r.id.begin(), r.id.end());
  return out;
}

ShareVector Dataset::Attributes() const {
  ShareVector v(attr_width_, 0);
  for (const auto& r : records_) v.Append(r.attr);
  return v;
}

Dataset ParseDatasetCsv(const std::string& text, size_t empty_width) {
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool header = false;
  std::vector<Record> records;
  size_t width = empty_width;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      PSA_ENFORCE(line == "id,attr_hex",
                  "line 1: expected header 'id,attr_hex', got '{}'", line);
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    PSA_ENFORCE(comma != std::string::npos &&
                    line.find(',', comma + 1) == std::string::npos,
                "line {}: expected two fields", lineno);
    Record r{line.substr(0, comma), FromHex(line.substr(comma + 1))};
    if (records.empty()) width = r.attr.size();
    records.push_back(std::move(r));
  }
  PSA_ENFORCE(header, "dataset is missing the 'id,attr_hex' header");
  return Dataset(std::move(records), width);
}

std::string DatasetToCsv(const Dataset& d) {
  std::string out = "id,attr_hex\n";
  for (const auto& r : d.records()) {
    out += fmt::format("{},{}\n", r.id, ToHex(r.attr));
  }
  return out;
}

Dataset LoadDataset(const std::string& path, size_t empty_width) {
  std::ifstream f(path);
  PSA_ENFORCE(f.good(), "cannot open dataset '{}'", path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseDatasetCsv(ss.str(), empty_width);
}

void SaveDataset(const Dataset& d, const std::string& path) {
  std::ofstream f(path);
  PSA_ENFORCE(f.good(), "cannot write '{}'", path);
  f << DatasetToCsv(d);
}

std::pair<Dataset, Dataset> GenerateDatasets(size_t n, size_t m, double alpha,
                                             size_t attr_width,
                                             RandomSource& rng) {
  PSA_ENFORCE(alpha >= 0.0 && alpha <= 1.0, "overlap {} outside [0, 1]",
              alpha);
  PSA_ENFORCE(attr_width > 0, "attribute width must be positive");
  const size_t shared = static_cast<size_t>(
      std::floor(alpha * static_cast<double>(std::min(n, m))));
  // Distinct ids: shared ones first, then private ones per side.
  auto make_id = [&](const char* tag, size_t i) {
    return fmt::format("{}{:08x}{}", tag, i, ToHex(rng.NextBytes(4)));
  };
  std::vector<std::string> common(shared);
  for (size_t i = 0; i < shared; ++i) common[i] = make_id("c", i);
  auto build = [&](size_t size, const char* tag) {
    std::vector<Record> recs;
    recs.reserve(size);
    for (size_t i = 0; i < size; ++i) {
      recs.push_back({i < shared ? common[i] : make_id(tag, i),
                      rng.NextBytes(attr_width)});
    }
    auto sigma = RandomPermutation(std::max<size_t>(size, 1), rng);
    std::vector<Record> shuffled(size);
    for (size_t i = 0; i < size; ++i) shuffled[i] = std::move(recs[sigma[i]]);
    return Dataset(std::move(shuffled), attr_width);
  };
  Dataset a = build(n, "a");
  Dataset b = build(m, "b");
  return {std::move(a), std::move(b)};
}

}  // namespace psa::align
