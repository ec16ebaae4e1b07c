#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dccanet {

enum class ErrorCode {
  io,
  parse,
  invalid_argument,
  too_short,
  degenerate,
  rank_deficient,
  non_convergence,
};

/// Machine-readable name, used in gap logs and CLI error reports.
constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::too_short: return "too_short";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::non_convergence: return "non_convergence";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dccanet

namespace dccanet {

/// A rolling window that produced no record, with the reason.
struct WindowGap {
  std::size_t window = 0;
  ErrorCode code = ErrorCode::degenerate;
  std::string message;
};

}  // namespace dccanet
