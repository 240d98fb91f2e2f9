// Copyright 2026 The collective-lab Authors
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

namespace clab {

/// Base class for every error raised by the library.
class LabError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define CLAB_DEFINE_ERROR(Name)                                     \
    class Name : public LabError {                                  \
      public:                                                       \
        explicit Name(const std::string &what) : LabError(#Name ": " + what) {} \
    }

CLAB_DEFINE_ERROR(NotHermitian);
CLAB_DEFINE_ERROR(NotPsd);
CLAB_DEFINE_ERROR(NotUnit);
CLAB_DEFINE_ERROR(ShapeMismatch);
CLAB_DEFINE_ERROR(NegativeProbability);
CLAB_DEFINE_ERROR(OutOfRange);
CLAB_DEFINE_ERROR(Leakage);
CLAB_DEFINE_ERROR(NoSolution);
CLAB_DEFINE_ERROR(NoBracket);
CLAB_DEFINE_ERROR(UnsupportedStructure);
CLAB_DEFINE_ERROR(ParseError);

#undef CLAB_DEFINE_ERROR

} // namespace clab
