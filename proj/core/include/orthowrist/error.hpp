#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthowrist {

/// Machine-readable failure classes shared by every module and the CLI.
enum class ErrorCategory {
  invalid_input,
  out_of_range,
  singular_orientation,
  unreachable_orientation,
  singular_configuration,
  branch_jump,
  inconsistent_state,
  model_inconsistency,
  invalid_spec,
  config_error,
};

/// Kebab-case name used on the command line, e.g. "singular-orientation".
std::string_view to_string(ErrorCategory category) noexcept;

class WristError : public std::runtime_error {
 public:
  WristError(ErrorCategory category, const std::string& message);

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace orthowrist
