// Copyright 2026 The workfluct Authors
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
#include <string_view>

namespace workfluct {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotHermitian,
    NotUnitTrace,
    NotPositive,
    NotUnitary,
    NotProjector,
    DegenerateSpectrum,
    ConvergenceFailure,
    ResolutionTooCoarse,
    PostselectionImpossible,
    SingularGibbsState,
    NotAProbability,
    BracketFailure,
    ProtocolMismatch,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Numerical failures are reported separately from malformed inputs so that
/// drivers can map them onto distinct exit codes.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace workfluct
