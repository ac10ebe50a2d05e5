#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nmd/clustering.hpp"
#include "nmd/fnn.hpp"
#include "nmd/signal.hpp"
#include "nmd/trainer.hpp"

namespace nmd {

/// Command line did not parse or validate; exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; carries the text to print.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const std::string& text() const noexcept { return text_; }
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

struct RunConfig {
  enum class Command { kSynth, kDecompose, kSpectrum, kExtrapolate, kEval };

  Command command = Command::kSynth;

  std::string input_path;
  std::string out_path;
  std::string out_dir;
  std::string checkpoint_path;

  SyntheticSignal signal_kind = SyntheticSignal::kXP;
  Index n = 1024;
  double noise = 0.0;
  std::uint64_t seed = 0;

  TrainConfig train;
  FnnConfig fnn;
  ClusterConfig cluster;

  bool zero_mean = false;
  double horizon = 0.0;
  double step = 0.0;  // 0 means one training grid step
};

/// Parses and validates a full argument vector (no program name). Throws
/// UsageError on unknown flags or out-of-range values, HelpRequested for
/// --help.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes one subcommand. Returns 0 on success; on failure the partially
/// written outputs of this invocation are removed and the module error
/// propagates (the binary maps it to an exit status).
int run(const RunConfig& config);

}  // namespace nmd
