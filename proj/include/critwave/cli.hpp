#ifndef CRITWAVE_CLI_HPP
#define CRITWAVE_CLI_HPP

#include <string>
#include <vector>

namespace critwave::cli {

// Subcommands: simulate, radiate, peel, segment, sweep, verify.
int dispatch(const std::vector<std::string>& args);

}  // namespace critwave::cli

#endif
