#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rolescope::testing {

struct CliResult {
  int exit_code = -1;
  std::string output; // stdout only
};

// Runs the built CLI with the given arguments; stderr goes to a scratch
// file so tests can assert on clean stdout.
inline CliResult run_cli(const std::string& args,
                         const std::string& stderr_path = "/dev/null") {
  const std::string cmd =
      std::string(RS_CLI_PATH) + " " + args + " 2>" + stderr_path;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CliResult r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

} // namespace rolescope::testing
