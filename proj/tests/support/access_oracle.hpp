#pragma once

// The role matrix written out cell by cell, independent of the decision
// function. Rows follow access::all_actions; columns are the situations.

#include <array>
#include <string_view>

#include "scriptorium/access.hpp"

namespace scriptorium::testkit {

enum class Situation { own, same_org, granted, cross_org };
inline constexpr Situation all_situations[] = {Situation::own, Situation::same_org, Situation::granted,
                                               Situation::cross_org};

inline std::string_view to_string(Situation s) {
  switch (s) {
    case Situation::own: return "own";
    case Situation::same_org: return "same-org";
    case Situation::granted: return "granted";
    case Situation::cross_org: return "cross-org";
  }
  return "?";
}

// 'Y' allow, 'N' deny; columns: own, same-org, granted, cross-org.
inline bool expected_decision(access::Role role, access::Action action, Situation where) {
  using R = access::Role;
  static constexpr std::array<std::string_view, 10> system_admin = {
      "YYYY", "YYYY", "YYYY", "YYYY", "YYYY", "YYYY", "YYYY", "YYYY", "YYYY", "YYYY"};
  static constexpr std::array<std::string_view, 10> org_admin = {
      "YYYN",  // view
      "YYYN",  // create
      "YYYN",  // edit
      "YYYN",  // remove
      "YYYN",  // request-publish
      "YYYN",  // approve-publish
      "YYYY",  // manage-vocab (vocabularies are shared)
      "YYYN",  // manage-users
      "NNNN",  // manage-orgs
      "YYYN",  // grant-edit
  };
  static constexpr std::array<std::string_view, 10> editor = {
      "YYYN",  // view
      "YYYN",  // create
      "YNYN",  // edit
      "YNNN",  // remove
      "YNYN",  // request-publish
      "NNNN",  // approve-publish
      "NNNN",  // manage-vocab
      "NNNN",  // manage-users
      "NNNN",  // manage-orgs
      "YNNN",  // grant-edit
  };
  static constexpr std::array<std::string_view, 10> guest = {
      "YYYN", "NNNN", "NNNN", "NNNN", "NNNN", "NNNN", "NNNN", "NNNN", "NNNN", "NNNN"};
  const auto& table = role == R::system_admin ? system_admin
                      : role == R::org_admin  ? org_admin
                      : role == R::editor     ? editor
                                              : guest;
  return table[static_cast<size_t>(action)][static_cast<size_t>(where)] == 'Y';
}

/// The resource an action targets in a given situation. Entities belong to
/// `home` unless the situation is cross-org.
inline access::Resource resource_for(access::Action action, Situation where, const access::User& user,
                                     std::string_view home, std::string_view away, std::string_view other_user,
                                     std::string_view entity_id) {
  using A = access::Action;
  std::string org(where == Situation::cross_org ? away : home);
  switch (action) {
    case A::manage_vocab:
    case A::manage_orgs: return access::Resource::global();
    case A::create:
    case A::manage_users: return access::Resource::organisation(org);
    default: break;
  }
  std::string creator(where == Situation::own ? std::string_view(user.user_id) : other_user);
  return access::Resource::entity(org, creator, std::string(entity_id));
}

}  // namespace scriptorium::testkit
