#include "orthowrist/error.hpp"

namespace orthowrist {

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::invalid_input: return "invalid-input";
    case ErrorCategory::out_of_range: return "out-of-range";
    case ErrorCategory::singular_orientation: return "singular-orientation";
    case ErrorCategory::unreachable_orientation: return "unreachable-orientation";
    case ErrorCategory::singular_configuration: return "singular-configuration";
    case ErrorCategory::branch_jump: return "branch-jump";
    case ErrorCategory::inconsistent_state: return "inconsistent-state";
    case ErrorCategory::model_inconsistency: return "model-inconsistency";
    case ErrorCategory::invalid_spec: return "invalid-spec";
    case ErrorCategory::config_error: return "config-error";
  }
  return "unknown";
}

WristError::WristError(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

}  // namespace orthowrist
