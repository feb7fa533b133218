#pragma once

// Runs the CLI as a child process and captures stdout and the exit code.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace lhv::testing {

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

inline CommandResult run_lhvlab(const std::string& args) {
    const std::string cmd = std::string(LHVLAB_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    CommandResult r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace lhv::testing
