#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

namespace fractspec::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kInvalid = 2, kIndeterminate = 3 };

/// Runs one job: `fractspec <command> [payload-file|-] [--json TEXT] [flags]`.
/// The report goes to --output (or `out`); diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// JSON text with a fixed layout: two-space indent, insertion order, and
/// floats printed with 17 significant digits.
std::string dump_report(const nlohmann::ordered_json& j);

}  // namespace fractspec::cli
