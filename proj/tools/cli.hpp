#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace helicoid::cli {

// Exit codes of run().
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kCheckFailed = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace helicoid::cli
