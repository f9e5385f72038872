// Copyright 2026 The AgriSynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace agrisynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid, inconsistent or corrupt input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures (unwritable directory, short write, ...).
class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Failures of a patch generator endpoint: misses, crashes, malformed output, timeouts.
class GeneratorError : public Error {
 public:
  using Error::Error;
};

}  // namespace agrisynth
