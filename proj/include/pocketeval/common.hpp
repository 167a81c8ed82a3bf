#pragma once

#include <stdexcept>
#include <string>

namespace pocketeval {

// Hard failures (bad geometry, unusable input, misaligned metric inputs).
// Recoverable per-record problems travel as issue lists next to results instead.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pocketeval
