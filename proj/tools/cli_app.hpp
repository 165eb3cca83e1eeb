#pragma once

#include <iosfwd>

namespace fracback::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,      // bad flags, domain errors, parameter-choice failures
    kIo = 3,
    kNumerical = 4,
};

// Full command-line front end. `env_out` is the value of FRACBACK_OUT
// (may be null).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const char* env_out);

}  // namespace fracback::cli
