#include "scriptorium/error.hpp"

namespace scriptorium {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::syntax: return "syntax";
    case Errc::duplicate_name: return "duplicate-name";
    case Errc::unknown_field_kind: return "unknown-field-kind";
    case Errc::unresolved_reference: return "unresolved-reference";
    case Errc::no_such_segment: return "no-such-segment";
    case Errc::index_on_singular_segment: return "index-on-singular-segment";
    case Errc::collision: return "collision";
    case Errc::parent_not_found: return "parent-not-found";
    case Errc::non_additive_change: return "non-additive-change";
    case Errc::unknown_type: return "unknown-type";
    case Errc::unknown_entity: return "unknown-entity";
    case Errc::unknown_version: return "unknown-version";
    case Errc::revision_conflict: return "revision-conflict";
    case Errc::schema_violation: return "schema-violation";
    case Errc::term_not_in_static_vocabulary: return "term-not-in-static-vocabulary";
    case Errc::unknown_term: return "unknown-term";
    case Errc::illegal_transition: return "illegal-transition";
    case Errc::insufficient_role: return "insufficient-role";
    case Errc::validation_failed: return "validation-failed";
    case Errc::unresolvable_link: return "unresolvable-link";
    case Errc::schema_mismatch: return "schema-mismatch";
    case Errc::cross_org: return "cross-org";
    case Errc::permission_denied: return "permission-denied";
    case Errc::duplicate_user: return "duplicate-user";
    case Errc::unknown_user: return "unknown-user";
    case Errc::unknown_org: return "unknown-org";
    case Errc::authentication_failed: return "authentication-failed";
    case Errc::unknown_vocabulary: return "unknown-vocabulary";
    case Errc::static_vocabulary_rejects_user_term: return "static-vocabulary-rejects-user-term";
    case Errc::empty_label: return "empty-label";
    case Errc::invalid_merge: return "invalid-merge";
    case Errc::malformed_line: return "malformed-line";
    case Errc::cycle_detected: return "cycle-detected";
    case Errc::unknown_concept: return "unknown-concept";
    case Errc::unrecognized_expression: return "unrecognized-expression";
    case Errc::decade_not_aligned: return "decade-not-aligned";
    case Errc::nested_range: return "nested-range";
    case Errc::inverted_range: return "inverted-range";
    case Errc::undeclared_prefix: return "undeclared-prefix";
    case Errc::missing_domain: return "missing-domain";
    case Errc::malformed_path: return "malformed-path";
    case Errc::missing_input: return "missing-input";
    case Errc::invalid_path: return "invalid-path";
    case Errc::type_mismatch: return "type-mismatch";
    case Errc::name_collision: return "name-collision";
    case Errc::unknown_query: return "unknown-query";
    case Errc::unknown_source: return "unknown-source";
    case Errc::empty_name: return "empty-name";
    case Errc::network: return "network";
    case Errc::io: return "io";
    case Errc::bad_request: return "bad-request";
  }
  return "unknown";
}

std::string to_string(const Issue& issue) {
  std::string out = issue.severity == Severity::error ? "error" : "warning";
  out += " [" + issue.code + "]";
  if (!issue.path.empty()) out += " " + issue.path;
  out += ": " + issue.message;
  return out;
}

}  // namespace scriptorium
