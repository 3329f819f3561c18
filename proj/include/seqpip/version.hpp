#pragma once

namespace seqpip {

inline constexpr const char* kToolName = "seqpip";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace seqpip
