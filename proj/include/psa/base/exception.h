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

#include <stdexcept>
#include <string>

#include "fmt/format.h"

namespace psa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The peer sent something unexpected, or a protocol-level check failed.
class ProtocolAbort : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace psa

#define PSA_THROW(Type, ...) throw Type(fmt::format(__VA_ARGS__))

#define PSA_ENFORCE(cond, ...)                                          \
  do {                                                                  \
    if (!(cond)) {                                                      \
      throw ::psa::InvalidArgument(fmt::format("{}:{} enforce `{}`: {}", \
                                               __FILE__, __LINE__,      \
                                               #cond,                   \
                                               fmt::format(__VA_ARGS__))); \
    }                                                                   \
  } while (false)
