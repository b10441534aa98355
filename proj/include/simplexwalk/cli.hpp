#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace swalk::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,   // nothing is written
  kRuntimeError = 2,
  kAssertFailed = 3,  // only with --assert
};

struct Options {
  std::string command;  // simulate | verify | assumptions | geometry | urn
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned threads = 1;
  bool assert_mode = false;
  std::filesystem::path out = "out";
};

/// Runs one command. Human-readable progress goes to stderr.
int run_command(const Options& opts);

/// Parses argv (CLI11) and dispatches to run_command.
int run_cli(int argc, char** argv);

}  // namespace swalk::cli
