#ifndef ERSPAR_CLI_HPP
#define ERSPAR_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace erspar {

// Dispatches the subcommands (sparsify, derand, verify, resistances, kwise,
// lowerbound, round). Exit codes: 0 success/YES, 1 verification NO, 2 usage
// error, 3 computation error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

} // namespace erspar

#endif
