#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfs {

// Exit codes: 0 success, 2 usage error, 3 data error, 4 resource cap.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitResource = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfs
