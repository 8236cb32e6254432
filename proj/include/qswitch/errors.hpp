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

#include <optional>
#include <stdexcept>
#include <string>

namespace qswitch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A density-operator invariant was violated. `invariant` names the check
// ("hermitian", "trace", "positivity", "finite"), `step` is set when the
// failure happened inside a time-stepping loop.
class ValidationError : public Error {
public:
    ValidationError(std::string invariant, const std::string& what,
                    std::optional<long> step = std::nullopt);

    const std::string& invariant() const noexcept { return invariant_; }
    const std::string& detail() const noexcept { return detail_; }
    std::optional<long> step() const noexcept { return step_; }

    ValidationError at_step(long step) const;

private:
    std::string invariant_;
    std::string detail_;
    std::optional<long> step_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace qswitch
