#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seqpip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `seqpip` binary. args excludes the program name.
// Domain errors print one line "seqpip: error: <message>" to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqpip::cli
