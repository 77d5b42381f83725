// Copyright 2026 the fusion-bench authors
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

#include <ostream>

namespace fusion {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitDiverged = 3,
};

/// Entry point behind the `fusion-bench` executable. Subcommands: synth,
/// split, train, eval, ablate, validate.
int
run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fusion
