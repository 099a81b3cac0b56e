#ifndef OKM_TOOLS_COMMANDS_HPP
#define OKM_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace okm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;

/// Entry point of the `okm` tool. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace okm::cli

#endif
