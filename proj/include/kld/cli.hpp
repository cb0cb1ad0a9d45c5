#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kld {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitPass = 0,        // pass, or something was found
    kExitFail = 1,        // fail, or nothing exists
    kExitUsage = 2,       // bad flags, parameters or input files
    kExitIncomplete = 3,  // a search ran out of budget
};

// Runs the command line given without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kld
