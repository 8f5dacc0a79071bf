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

#include "psa/perm/permutation.h"

#include <numeric>

#include "psa/base/exception.h"

namespace psa {

Permutation::Permutation(std::vector<Index> map) : map_(std::move(map)) {
  if (map_.empty()) {
    PSA_THROW(InvalidArgument, "permutation size must be at least 1");
  }
  auto report = ValidateInjection(map_, map_.size());
  if (!report.ok()) {
    PSA_THROW(InvalidArgument, "not a permutation: {}", report.ToString());
  }
}

Permutation Permutation::Identity(size_t n) {
  std::vector<Index> map(n);
  std::iota(map.begin(), map.end(), Index{0});
  return Permutation(std::move(map));
}

std::string InjectionReport::ToString() const {
  if (ok()) {
    return "ok";
  }
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{} value {} at position {}",
                       v.kind == InjectionViolation::Kind::kDuplicate
                           ? "duplicate"
                           : "out-of-range",
                       v.value, v.position);
  }
  return out;
}

InjectionReport ValidateInjection(std::span<const Index> map,
                                  size_t codomain_size) {
  InjectionReport report;
  std::vector<bool> seen(codomain_size, false);
  for (size_t i = 0; i < map.size(); ++i) {
    Index v = map[i];
    if (v >= codomain_size) {
      report.violations.push_back(
          {InjectionViolation::Kind::kOutOfRange, i, v});
    } else if (seen[v]) {
      report.violations.push_back({InjectionViolation::Kind::kDuplicate, i, v});
    } else {
      seen[v] = true;
    }
  }
  return report;
}

Injection::Injection(std::vector<Index> map, size_t codomain_size)
    : map_(std::move(map)), codomain_(codomain_size) {
  auto report = ValidateInjection(map_, codomain_);
  if (!report.ok()) {
    PSA_THROW(InvalidArgument, "not an injection into [{}]: {}", codomain_,
              report.ToString());
  }
}

Permutation RandomPermutation(size_t n, RandomSource& rng) {
  if (n == 0) {
    PSA_THROW(InvalidArgument, "permutation size must be at least 1");
  }
  std::vector<Index> map(n);
  std::iota(map.begin(), map.end(), Index{0});
  for (size_t i = n - 1; i > 0; --i) {
    size_t j = rng.Uniform(i + 1);
    std::swap(map[i], map[j]);
  }
  return Permutation(std::move(map));
}

Permutation Invert(const Permutation& p) {
  std::vector<Index> inv(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    inv[p[i]] = static_cast<Index>(i);
  }
  return Permutation(std::move(inv));
}

Permutation Compose(const Permutation& outer, const Permutation& inner) {
  PSA_ENFORCE(outer.size() == inner.size(), "compose size mismatch {} vs {}",
              outer.size(), inner.size());
  std::vector<Index> out(inner.size());
  for (size_t i = 0; i < inner.size(); ++i) {
    out[i] = outer[inner[i]];
  }
  return Permutation(std::move(out));
}

Injection ComposeRho2(const Injection& pi, const Permutation& rho1) {
  if (pi.codomain_size() != rho1.size()) {
    PSA_THROW(InvalidArgument,
              "injection codomain {} does not match permutation size {}",
              pi.codomain_size(), rho1.size());
  }
  const Permutation inv = Invert(rho1);
  std::vector<Index> out(pi.domain_size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = inv[pi[i]];
  }
  return Injection(std::move(out), rho1.size());
}

}  // namespace psa
