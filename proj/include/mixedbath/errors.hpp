// Copyright 2026 The mixedbath Authors
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

namespace mixedbath {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Factor layout mismatch or invalid factor index.
struct DimensionError : Error {
    using Error::Error;
};

// Caller broke a documented precondition (non-Hermitian input, negative rate, ...).
struct ContractError : Error {
    using Error::Error;
};

// A matrix function was evaluated outside its domain.
struct DomainError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// A quantity that must be real came out with a significant imaginary part.
struct NumericalError : Error {
    using Error::Error;
};

class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double last_good_time)
        : Error(what), last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

}  // namespace mixedbath
