#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ebus::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInvalidInput = 2, kResourceCap = 3 };

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0,1,5" or an inclusive range "8:30:2".
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Flat `key = value` lines (or `key value`); `#` starts a comment.
/// Returned as `--key=value` tokens.
std::vector<std::string> read_config_tokens(const std::string& path);

}  // namespace ebus::cli
