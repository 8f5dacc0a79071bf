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

#include <string>
#include <vector>

#include "psa/base/bytes.h"
#include "psa/crypto/sharing.h"

namespace psa::align {

inline constexpr size_t kMaxIdBytes = 64;

struct Record {
  std::string id;
  Bytes attr;
};

// ID-keyed records with attributes of one fixed width. IDs are distinct.
class Dataset {
 public:
  Dataset() = default;
  // Validates; throws InvalidArgument on duplicate or oversized IDs and on
  // attributes of the wrong width.
  Dataset(std::vector<Record> records, size_t attr_width);

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  size_t attr_width() const { return attr_width_; }
  const std::vector<Record>& records() const { return records_; }
  const Record& operator[](size_t i) const { return records_[i]; }

  std::vector<Bytes> IdBytes() const;
  // Attributes as one row per record.
  ShareVector Attributes() const;

 private:
  std::vector<Record> records_;
  size_t attr_width_ = 0;
};

// CSV with header `id,attr_hex`. Width comes from the first record; an empty
// file yields width `empty_width`.
Dataset ParseDatasetCsv(const std::string& text, size_t empty_width = 0);
std::string DatasetToCsv(const Dataset& d);
Dataset LoadDataset(const std::string& path, size_t empty_width = 0);
void SaveDataset(const Dataset& d, const std::string& path);

// Synthetic pair for benchmarks: floor(alpha * min(n, m)) shared IDs.
std::pair<Dataset, Dataset> GenerateDatasets(size_t n, size_t m, double alpha,
                                             size_t attr_width,
                                             RandomSource& rng);

}  // namespace psa::align
