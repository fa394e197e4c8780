// Copyright 2026 The muclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace muclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input matrix failed a Hermiticity or positivity check.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Effective rank r^k (or another size guard) exceeded its cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// An outcome with zero probability but nonzero sensitivity; Fisher information diverges.
class SingularOutcome : public Error {
 public:
  using Error::Error;
};

class InconsistentPovm : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace muclab
