#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scriptorium {

/// Stable machine-readable error codes. The string form is what the HTTP
/// layer reports in `{code, message, details}` bodies.
enum class Errc {
  syntax,
  duplicate_name,
  unknown_field_kind,
  unresolved_reference,
  no_such_segment,
  index_on_singular_segment,
  collision,
  parent_not_found,
  non_additive_change,
  unknown_type,
  unknown_entity,
  unknown_version,
  revision_conflict,
  schema_violation,
  term_not_in_static_vocabulary,
  unknown_term,
  illegal_transition,
  insufficient_role,
  validation_failed,
  unresolvable_link,
  schema_mismatch,
  cross_org,
  permission_denied,
  duplicate_user,
  unknown_user,
  unknown_org,
  authentication_failed,
  unknown_vocabulary,
  static_vocabulary_rejects_user_term,
  empty_label,
  invalid_merge,
  malformed_line,
  cycle_detected,
  unknown_concept,
  unrecognized_expression,
  decade_not_aligned,
  nested_range,
  inverted_range,
  undeclared_prefix,
  missing_domain,
  malformed_path,
  missing_input,
  invalid_path,
  type_mismatch,
  name_collision,
  unknown_query,
  unknown_source,
  empty_name,
  network,
  io,
  bad_request,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::vector<std::string> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  Errc code_;
  std::vector<std::string> details_;
};

enum class Severity { warning, error };

/// A validation finding. Validators return these instead of throwing.
struct Issue {
  Severity severity = Severity::error;
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Issue&) const = default;
};

std::string to_string(const Issue& issue);

inline bool has_errors(const std::vector<Issue>& issues) {
  for (const auto& i : issues)
    if (i.severity == Severity::error) return true;
  return false;
}

}  // namespace scriptorium
