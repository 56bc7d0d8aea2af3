// Command-line entry point. Exit codes: 0 success, 1 usage error, 2 data
// error, 3 internal error.

#ifndef REDREP_CLI_HPP
#define REDREP_CLI_HPP

namespace redrep::cli {

// argv follows main() conventions; argv[0] is the program name.
int run(int argc, const char* const* argv);

}  // namespace redrep::cli

#endif  // REDREP_CLI_HPP
