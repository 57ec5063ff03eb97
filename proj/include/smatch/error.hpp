#pragma once

#include <stdexcept>
#include <string>

namespace smatch {

enum class ErrorKind {
  invalid_input,
  dimension_mismatch,
  degenerate_neuron,
  parse,
  format,
  too_large,
  generation,
};

const char* to_string(ErrorKind kind);

/// Every failure in the library surfaces as an Error; the kind maps onto the
/// CLI's structured error records.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace smatch
