#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causal_cgs::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDiagnostics = 1;  // model problems, failed checks
inline constexpr int kUsage = 2;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal_cgs::cli
