// Copyright 2026 The Forrelation Toolkit Authors
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

namespace forr {

/// Raised when a vector length is not a power of two or a dimension is unusable.
struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidIndex : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Block counts or block lengths disagree with what an operation expects.
struct InvalidShape : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input values outside the admissible domain (e.g. a non-±1 entry where bits are required).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidTree : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A size guard (table width, pairing enumeration, ...) was exceeded.
struct ResourceLimit : std::length_error {
    using std::length_error::length_error;
};

}  // namespace forr
