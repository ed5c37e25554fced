#pragma once

#include <iosfwd>

namespace gtm {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,      // invalid flags or configuration
  kExitInput = 2,       // unreadable or empty input
  kExitVocabulary = 3,  // model and corpus vocabularies differ
  kExitCorrupt = 4,     // corrupt model file
};

/// Entry point of the `gtm` tool: subcommands gen, train, eval, inspect and
/// trace. Output is key=value lines on `out`, diagnostics on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtm
