// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace spsatune::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kObjectiveAbort = 2, kIo = 3 };

/// Set asynchronously (SIGINT/SIGTERM) to stop a running tune or resume
/// after the current iteration.
std::atomic<bool>& stop_flag();

/// Entry point behind the `spsatune` binary. `args` excludes the program
/// name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spsatune::cli
