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

namespace workfluct {

/// Strict mode halves every tolerance used by input validation and by the
/// built-in checks. It is initialised from the WORKFLUCT_STRICT environment
/// variable ("1" enables it) and can be overridden programmatically.
bool strict_mode();
void set_strict_mode(bool enabled);

/// Applies the strict-mode scaling to a nominal tolerance.
double tol(double nominal);

}  // namespace workfluct
