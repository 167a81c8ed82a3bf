#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pocketeval {

struct RunResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // stdout and stderr merged
};

// fork/exec without a shell; argv[0] is resolved via PATH. A timeout
// (seconds, 0 = none) kills the whole process group.
RunResult run_process(const std::vector<std::string>& argv, double timeout_sec = 0,
                      const std::optional<std::string>& workdir = {});

// Expands {receptor} {ligand} {out} {cx} {cy} {cz} placeholders in a
// space-separated command template. Unknown placeholders throw Error.
std::vector<std::string> expand_command(const std::string& command_template,
                                        const std::string& receptor, const std::string& ligand,
                                        const std::string& out, double cx, double cy, double cz);

}  // namespace pocketeval
