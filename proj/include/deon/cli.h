// Command-line front end. Exit codes: 0 positive verdict, 1 negative,
// 2 undetermined (bound or budget exhausted), 3 usage or input error.
#ifndef DEON_CLI_H
#define DEON_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace deon {

inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitUsage = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deon

#endif  // DEON_CLI_H
