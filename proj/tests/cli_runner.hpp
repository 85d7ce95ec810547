// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <string>

namespace testing {

/// Runs the CLI with the given arguments and returns its exit status; stderr is
/// captured to `log` when given.
inline int run_cli(const std::string& args, const std::string& log = "/dev/null") {
  const std::string cmd = std::string(LEVYNMF_CLI_PATH) + " " + args + " >/dev/null 2>" + log;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace testing
