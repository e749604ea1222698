// SPDX-License-Identifier: Apache-2.0
//
// sarsub: quantitative signal-subspace SAR imaging toolkit
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

#pragma once

#include <stdexcept>
#include <string>

namespace sarsub {

// Invalid user configuration. `key()` names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string &what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

// Mismatched vector/matrix sizes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A search point or target coincides with a platform position.
class SingularGeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Failed numerical consistency check (SVD failure, non-Hermitian form, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Measurement window did not contain the requested feature.
class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sarsub
