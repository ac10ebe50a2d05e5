#pragma once

#include <stdexcept>
#include <string>

namespace nmd {

/// Unusable input: malformed CSV, out-of-contract arguments, degenerate data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checkpoint documents that cannot be read back (bad structure or version).
class CheckpointError : public InputError {
 public:
  using InputError::InputError;
};

/// Training loss became non-finite; carries the epoch it happened at.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  long epoch() const noexcept { return epoch_; }

 private:
  long epoch_;
};

/// Degenerate clustering input, e.g. every unit energy is zero.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmd
