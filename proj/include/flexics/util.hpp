#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flexics {

// Invalid user input (bad flags, incompatible task configuration).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed dataset text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

// The constrained task has no solutions at all.
struct UnsatisfiableTaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse (violated precondition).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// Compensated accumulation; cells can hold many small weights.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

enum class LogLevel { none = 0, error = 1, warn = 2, info = 3, debug = 4 };

// Level parsed once from the FLEXICS_LOG environment variable.
LogLevel log_level();
void log_line(LogLevel level, std::string_view msg);

}  // namespace flexics
