// Copyright 2026 The qswitch Authors
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

// Small fixed systems used by the CLI, the tests and the bindings.

#include "qswitch/linalg.hpp"
#include "qswitch/lyapunov.hpp"
#include "qswitch/mme.hpp"
#include "qswitch/sme.hpp"

#include <vector>

namespace qswitch {

// Three-level pair where neither generator nor any convex combination makes
// |0> GAS, while switching with K = I - |0><0| does.
//   L1: H = 0,                 L = |0><2| + |1><1| + |2><2|
//   L2: H = |0><2| + |2><0|,   L = |0><1| + |1><1| + |2><2|
// Both measure C = K.
std::vector<LindbladGenerator> counterexample_generators();
TargetSubspace counterexample_target();
LyapunovCertificate counterexample_certificate();
ControlProblem counterexample_problem();

// Qubit decay: L = sigma_- = |0><1|, C = |1><1|, H = 0.
LindbladGenerator qubit_decay_generator(double gamma = 1.0, double kappa = 1.0);

}  // namespace qswitch
