#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isoposet/linalg.hpp"
#include "isoposet/matrix_file.hpp"

namespace isoposet::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Status { ok, violation, error };

std::string to_string(Status s);
int exit_code(Status s);

struct Report {
  std::string command;
  Status status = Status::error;
  Json payload = Json::object();
  std::uint64_t seed = 0;
  Tolerances tolerances;

  Json to_json() const;
  /// Pretty-printed JSON followed by a newline.
  std::string render() const;
};

/// Flags (without the leading dashes) mapped to their values.
using Args = std::map<std::string, std::string>;

struct FlagSpec {
  std::string name;
  std::string help;
  bool required = false;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<FlagSpec> flags;
};

/// Every subcommand with its own flags; the shared flags are listed by
/// common_flags().
const std::vector<CommandSpec>& commands();
const std::vector<FlagSpec>& common_flags();

/// Never throws: every failure becomes a Report with status error (bad input,
/// unknown command or flag) or violation (a well-posed question answered in
/// the negative). ISOPOSET_SEED, when set, overrides --seed.
Report run(const std::string& command, const Args& args);

/// Report with status error and the message in payload.error.
Report error_report(const std::string& command, const std::string& message);

/// Writes the rendered report to args["output"] or stdout; returns the exit code.
int emit(const Report& report, const Args& args);

}  // namespace isoposet::cli
