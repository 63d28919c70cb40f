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
//
// Batch front door: gen | fit | train | eval | curve, driven by a JSON
// config file plus flags. Exit codes: 0 success, 1 runtime failure,
// 2 configuration or usage error.

#ifndef BEAMSENSE_CLI_HPP
#define BEAMSENSE_CLI_HPP

#include <string>
#include <vector>

namespace beamsense {

int run_cli(const std::vector<std::string> &args);

}  // namespace beamsense

#endif  // BEAMSENSE_CLI_HPP
