#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace goi::cli {

// args excludes the program name. Returns the process exit code:
// 0 ok, 1 law failure or divergence, 2 usage or parse error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err, bool interactive = false);

}  // namespace goi::cli
