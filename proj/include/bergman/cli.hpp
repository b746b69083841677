#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bergman {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitValidation = 2, kExitNumerical = 3 };

// Entry point of the bergman_lab binary; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bergman
