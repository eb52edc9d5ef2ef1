#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmimo/config.hpp"

namespace gmimo::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfigError = 2,
  kExitNumericalError = 3,
  kExitIoError = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
};

struct RunResult {
  int exit_code = kExitSuccess;
  std::vector<std::string> outputs;  // file names inside out_dir, manifest last
  std::string error_json;            // empty on success
};

// Runs one experiment. Result files are staged and moved into place only
// when the whole run succeeds; the manifest is written in every case.
RunResult run(const ScenarioConfig& config, const RunOptions& options);

// Reads and parses `config_path`, checks it declares `experiment`, and runs
// it. Error JSON goes to `err`. Returns the process exit code.
int run_from_file(const std::string& experiment, const std::filesystem::path& config_path,
                  const RunOptions& options, std::ostream& err);

}  // namespace gmimo::cli
