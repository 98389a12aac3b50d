#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lorentz {

/// Exit codes of run_cli.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
};

/// Command-line entry point. `args` excludes the program name. Primary
/// output goes to --out when given, otherwise to `out`; diagnostics go to
/// `err`.
///
///   sample    --eta E [--m M | --sigma S] [--n N] [--seed K] [--out F] [--format csv|json]
///   density   --eta E --in F [--m M] [--sigma S] [--out F] [--format csv|json]
///   test-t1   --eta E --m0 M0 --in F [--m M] [--out F]
///   test-t2   --eta E --in F [--m M] [--n N] [--seed K] [--out F]
///   verify    [--m M --m0 M0 --eta E] [--seed K] [--out F] [--format csv|json]
///
/// S is a JSON literal or @file holding {"lambda": .., "w": [..]} or a model
/// config {"eta": .., "sigma": {..}, "m": ..}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lorentz
