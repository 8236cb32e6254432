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

#include "qswitch/errors.hpp"

namespace qswitch {

namespace {
std::string format_validation(const std::string& invariant, const std::string& what,
                              std::optional<long> step) {
    std::string msg = invariant + ": " + what;
    if (step) msg += " (step " + std::to_string(*step) + ")";
    return msg;
}
}  // namespace

ValidationError::ValidationError(std::string invariant, const std::string& what,
                                 std::optional<long> step)
    : Error(format_validation(invariant, what, step)),
      invariant_(std::move(invariant)),
      detail_(what),
      step_(step) {}

ValidationError ValidationError::at_step(long step) const {
    return ValidationError(invariant_, detail_, step);
}

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error(field + ": " + what), field_(std::move(field)) {}

}  // namespace qswitch
