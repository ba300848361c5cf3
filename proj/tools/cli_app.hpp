#pragma once

#include <cstdint>
#include <ostream>

namespace mallows::cli {

inline constexpr std::uint64_t kDefaultSeed = 20160917;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kDegenerate = 4,
};

/// Entry point shared by the mallows binary and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mallows::cli
