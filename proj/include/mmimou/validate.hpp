// SPDX-License-Identifier: Apache-2.0
//
// mmimou-sim: system-level simulation of massive MIMO cellular networks
// sharing unlicensed spectrum with Wi-Fi
// Copyright (C) 2026 the mmimou-sim authors
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

#pragma once

#include <string>
#include <vector>

namespace mmimou {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured figure (residual, error, ...)
  double tolerance = 0.0;
};

// Fast numerical self-check on a tiny deterministic instance. Exercises the
// projector algebra, the degrees-of-freedom budget, zero-forcing nulling and
// normalization, and the reduction of enhanced to plain energy detection at
// d = 0. `inject_failure` forces the named check to fail (testing aid).
std::vector<InvariantCheck> run_invariant_suite(
    const std::string& inject_failure = "");

}  // namespace mmimou
