#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

enum class ErrorCode {
  invalid_parameter,
  series_overflow,
  degenerate_profile,
  grid_overflow,
  bracket_not_found,
  io_error,
};

const char *to_string(ErrorCode code);

/// Single exception type for every failure the library reports.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_parameter: return "invalid-parameter";
  case ErrorCode::series_overflow: return "series-overflow";
  case ErrorCode::degenerate_profile: return "degenerate-profile";
  case ErrorCode::grid_overflow: return "grid-overflow";
  case ErrorCode::bracket_not_found: return "bracket-not-found";
  case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

} // namespace mtlab
