#ifndef RAFU_COMMANDS_HPP
#define RAFU_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace rafu {

struct CommandArgs {
    std::string command; // validate | plan | propagate | summarize
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed; // overrides the config seed
    bool accept_failures = false;      // summarize: failures count as +inf in the bound
};

/// Runs one workflow command. Returns 0 on success, 1 on validation
/// failure, 2 on runtime failure; failures also emit one machine-readable
/// JSON line on `err`.
int run_command(const CommandArgs& args, std::ostream& out, std::ostream& err);

} // namespace rafu

#endif
