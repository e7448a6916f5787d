#pragma once

#include <iosfwd>

namespace ghmdenoise::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

/// Entry point of the ghmdenoise tool. Results go to `out`, diagnostics and
/// GA traces to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ghmdenoise::cli
