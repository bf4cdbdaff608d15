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

#include "workfluct/errors.hpp"
#include "workfluct/tolerance.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace workfluct {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotUnitTrace: return "NotUnitTrace";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::NotProjector: return "NotProjector";
        case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorKind::PostselectionImpossible: return "PostselectionImpossible";
        case ErrorKind::SingularGibbsState: return "SingularGibbsState";
        case ErrorKind::NotAProbability: return "NotAProbability";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::ProtocolMismatch: return "ProtocolMismatch";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::PostselectionImpossible:
        case ErrorKind::SingularGibbsState:
        case ErrorKind::NotAProbability:
        case ErrorKind::BracketFailure:
            return true;
        default:
            return false;
    }
}

namespace {

bool strict_from_env() {
    const char* v = std::getenv("WORKFLUCT_STRICT");
    return v != nullptr && std::strcmp(v, "1") == 0;
}

std::atomic<bool>& strict_flag() {
    static std::atomic<bool> flag{strict_from_env()};
    return flag;
}

}  // namespace

bool strict_mode() { return strict_flag().load(std::memory_order_relaxed); }

void set_strict_mode(bool enabled) { strict_flag().store(enabled, std::memory_order_relaxed); }

double tol(double nominal) { return strict_mode() ? 0.5 * nominal : nominal; }

}  // namespace workfluct
