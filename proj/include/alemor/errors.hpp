#ifndef ALEMOR_ERRORS_HPP
#define ALEMOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace alemor {

/// Failure categories, also used as process exit codes by the CLI.
enum class ErrorCode : int {
  Config = 2,
  CalibrationGate = 3,
  GreedyStall = 4,
  RomDivergence = 5,
  SolverBlowup = 6,
  Numeric = 7,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace alemor

#endif
