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

#include <atomic>
#include <cstdint>

namespace psa {

// Process-wide work counters used to check which protocol phase performs
// which kind of work.
struct WorkCounters {
  std::atomic<uint64_t> looping_calls{0};
  std::atomic<uint64_t> label_generations{0};

  void Reset() {
    looping_calls = 0;
    label_generations = 0;
  }
};

WorkCounters& GlobalWorkCounters();

}  // namespace psa
