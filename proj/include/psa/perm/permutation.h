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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psa/crypto/random.h"

namespace psa {

using Index = uint32_t;

// Bijection on [n], n >= 1, stored as map[i] = p(i).
class Permutation {
 public:
  Permutation() = default;
  // Throws InvalidArgument unless `map` rearranges 0..n-1.
  explicit Permutation(std::vector<Index> map);

  static Permutation Identity(size_t n);

  size_t size() const { return map_.size(); }
  Index operator[](size_t i) const { return map_[i]; }
  const std::vector<Index>& map() const { return map_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Index> map_;
};

struct InjectionViolation {
  enum class Kind { kDuplicate, kOutOfRange };
  Kind kind;
  size_t position;
  Index value;
};

struct InjectionReport {
  std::vector<InjectionViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string ToString() const;
};

// Checks distinctness and range without throwing.
InjectionReport ValidateInjection(std::span<const Index> map,
                                  size_t codomain_size);

// Map [c] -> [m] with distinct entries, c <= m.
class Injection {
 public:
  Injection() = default;
  // Throws InvalidArgument carrying the violation report.
  Injection(std::vector<Index> map, size_t codomain_size);

  size_t domain_size() const { return map_.size(); }
  size_t codomain_size() const { return codomain_; }
  Index operator[](size_t i) const { return map_[i]; }
  const std::vector<Index>& map() const { return map_; }

  bool operator==(const Injection&) const = default;

 private:
  std::vector<Index> map_;
  size_t codomain_ = 0;
};

// Fisher-Yates over the supplied stream.
Permutation RandomPermutation(size_t n, RandomSource& rng);

// q with q[p[i]] = i.
Permutation Invert(const Permutation& p);

// (outer . inner)(i) = outer(inner(i)).
Permutation Compose(const Permutation& outer, const Permutation& inner);

// rho2(i) = rho1^{-1}(pi(i)), so rho1(rho2(i)) = pi(i).
Injection ComposeRho2(const Injection& pi, const Permutation& rho1);

}  // namespace psa
