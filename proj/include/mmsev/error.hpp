#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mmsev {

// Failure categories surfaced to callers; tests assert on these codes.
enum class Errc {
  empty_input,
  ragged_row,
  non_numeric,
  wrong_arity,
  non_monotone_time,
  malformed_time,
  missing_field,
  out_of_range,
  duplicate_id,
  missing_label,
  missing_features,
  dimension_mismatch,
  version_mismatch,
  corrupt_model,
  strategy_mismatch,
  length_mismatch,
  missing_split,
  zero_duration,
  invalid_config,
  io_error,
  no_sessions,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(line ? message + " (line " + std::to_string(*line) + ")"
                                : message),
        code_(code),
        line_(line) {}

  Errc code() const noexcept { return code_; }
  // 1-based input line, set for every parse error.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message,
                              std::optional<std::size_t> line = std::nullopt) {
  throw Error(code, message, line);
}

}  // namespace mmsev
