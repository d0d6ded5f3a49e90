#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krc {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3, kExitAcceptance = 4 };

/// Entry point of the kuramoto-rc tool. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace krc
