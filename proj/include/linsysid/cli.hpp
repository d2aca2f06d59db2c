#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace linsysid {

/// Entry point of the `linsysid` tool; `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linsysid
