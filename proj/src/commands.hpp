#ifndef SURJECTIVE_COMMANDS_HPP
#define SURJECTIVE_COMMANDS_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace surjective::cli {

inline constexpr const char* tool_version = "0.1.0";

/// Exit codes of run().
enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2 };

/// Runs the command line given without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,0,0;0,1,0;0,0,1" or the dataset's "((1, 0, 0), (0, 1, 0), (0, 0, 1))".
std::array<std::vector<std::uint64_t>, 3> parse_triple(std::string_view text);

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

}  // namespace surjective::cli

#endif
