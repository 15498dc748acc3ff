// CLI entry point, callable in-process so tests can drive it directly.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uprod {

// Returns the process exit code: 0 ok, 1 domain error (or witness not
// found/invalid data), 2 usage or unknown command.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace uprod
