#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iotforge::cli {

// Exit codes: 0 success, 1 validation errors, 2 negative analysis verdict
// (unschedulable, deadlock or overflow found), 3 usage or I/O error.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNegativeVerdict = 2;
constexpr int kExitUsage = 3;

// Dispatches: validate | analyze | simulate | explore | generate.
// `args` excludes the program name. Output is deterministic for fixed
// inputs and seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace iotforge::cli
