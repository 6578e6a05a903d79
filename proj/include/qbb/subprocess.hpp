// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace qbb {

struct SubprocessResult {
  std::string output;     // child stdout, complete
  int exit_status = 0;    // wait status mapped to exit code (128+sig on signal)
  bool timed_out = false; // child was killed at the deadline
};

// Runs `command` through /bin/sh -c, feeds `input` to its stdin, collects
// stdout until EOF or the deadline. Reading and writing are interleaved so
// neither pipe can deadlock on a full buffer. On timeout the child is
// killed with SIGKILL. stderr passes through for debuggability.
SubprocessResult run_subprocess(const std::string& command, const std::string& input,
                                double timeout_s);

}  // namespace qbb
