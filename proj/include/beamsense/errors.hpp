// SPDX-License-Identifier: Apache-2.0
//
// beamsense - sensing-aided mmWave beam prediction simulator and learning pipeline
// Copyright (C) 2026 beamsense contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSENSE_ERRORS_HPP
#define BEAMSENSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace beamsense {

// One exception type per failure kind, all rooted in std::runtime_error so
// callers may catch broadly or by kind.
#define BEAMSENSE_ERROR_TYPE(NAME)                                 \
  struct NAME : std::runtime_error {                               \
    explicit NAME(const std::string &msg)                          \
        : std::runtime_error(std::string(#NAME) + ": " + msg) {}   \
  }

BEAMSENSE_ERROR_TYPE(ConfigError);
BEAMSENSE_ERROR_TYPE(DelayOutOfRange);
BEAMSENSE_ERROR_TYPE(DimensionMismatch);
BEAMSENSE_ERROR_TYPE(EmptyVector);
BEAMSENSE_ERROR_TYPE(WrongLength);
BEAMSENSE_ERROR_TYPE(CoincidentPoint);
BEAMSENSE_ERROR_TYPE(IoError);
BEAMSENSE_ERROR_TYPE(SchemaError);
BEAMSENSE_ERROR_TYPE(ColumnMissing);
BEAMSENSE_ERROR_TYPE(ParseError);
BEAMSENSE_ERROR_TYPE(TooFewSamples);
BEAMSENSE_ERROR_TYPE(NonFinite);
BEAMSENSE_ERROR_TYPE(DegenerateDesign);
BEAMSENSE_ERROR_TYPE(LengthMismatch);
BEAMSENSE_ERROR_TYPE(LabelOutOfRange);
BEAMSENSE_ERROR_TYPE(ShapeMismatch);
BEAMSENSE_ERROR_TYPE(EmptyDataset);
BEAMSENSE_ERROR_TYPE(BadK);
BEAMSENSE_ERROR_TYPE(IndexOutOfRange);
BEAMSENSE_ERROR_TYPE(DegenerateGroundTruth);
BEAMSENSE_ERROR_TYPE(EmptyFraction);

#undef BEAMSENSE_ERROR_TYPE

}  // namespace beamsense

#endif  // BEAMSENSE_ERRORS_HPP
