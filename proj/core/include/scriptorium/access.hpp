#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace scriptorium::access {

enum class Role { system_admin, org_admin, editor, guest };

enum class Action {
  view,
  create,
  edit,
  remove,
  request_publish,
  approve_publish,
  manage_vocab,
  manage_users,
  manage_orgs,
  grant_edit,
};

inline constexpr Role all_roles[] = {Role::system_admin, Role::org_admin, Role::editor, Role::guest};
inline constexpr Action all_actions[] = {
    Action::view,           Action::create,       Action::edit,         Action::remove,      Action::request_publish,
    Action::approve_publish, Action::manage_vocab, Action::manage_users, Action::manage_orgs, Action::grant_edit,
};

std::string_view to_string(Role r);
std::string_view to_string(Action a);
std::optional<Role> role_from_string(std::string_view s);
std::optional<Action> action_from_string(std::string_view s);

struct User {
  std::string user_id;
  std::string display_name;
  Role role = Role::guest;
  std::string org_id;  // empty for system administrators
  std::string credential_hash;
  bool edit_all = false;  // per-user widening of editor edit scope
};

struct Organisation {
  std::string org_id;
  std::string name;
  bool editors_edit_all = false;
  bool org_admins_edit_all = true;
  bool public_read = false;
};

struct EditGrant {
  std::string entity_id;
  std::string grantee_user_id;
  std::string granted_by;
  std::string granted_at;
};

/// What an action targets. Entity resources carry org, creator and id;
/// org resources only the org; global resources (vocabularies) neither.
struct Resource {
  enum class Scope { entity, organisation, global };
  Scope scope = Scope::global;
  std::string org_id;
  std::string creator_user_id;
  std::string entity_id;

  static Resource entity(std::string org, std::string creator, std::string id) {
    return {Scope::entity, std::move(org), std::move(creator), std::move(id)};
  }
  static Resource organisation(std::string org) { return {Scope::organisation, std::move(org), {}, {}}; }
  static Resource global() { return {}; }
};

struct Decision {
  bool allowed = false;
  std::string reason;

  static Decision allow() { return {true, {}}; }
  static Decision deny(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const noexcept { return allowed; }
  bool operator==(const Decision&) const = default;
};

/// Grants and per-org flags the decision function reads.
struct PolicyState {
  std::set<std::pair<std::string, std::string>> grants;  // (entity, grantee)
  std::map<std::string, Organisation> orgs;
};

/// Total and pure.
Decision authorize(const User& user, Action action, const Resource& resource, const PolicyState& state);

std::string hash_credential(std::string_view secret);
bool verify_credential(std::string_view secret, std::string_view stored);

struct CreateOrg {
  std::string org_id;
  std::string name;
};

struct CreateUser {
  std::string name;
  std::string display_name;
  Role role = Role::editor;
  std::string org_id;
};

using ProvisionCommand = std::variant<CreateOrg, CreateUser>;

struct Provisioned {
  std::string principal_id;
  std::string initial_credential;  // empty for organisations
};

/// Principals, grants and sessions. Safe for concurrent use.
class AccessControl {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  AccessControl();

  void set_clock(Clock clock);
  void set_session_idle_limit(std::chrono::seconds limit);

  Decision authorize(const User& user, Action action, const Resource& resource) const;

  /// Bootstraps the first system administrator without an actor.
  Provisioned bootstrap_admin(const std::string& name, const std::string& secret = {});
  Provisioned provision(const User& actor, const ProvisionCommand& command);

  EditGrant grant_edit(const User& granter, const Resource& entity, const std::string& grantee_user_id);
  void revoke_edit(const User& granter, const Resource& entity, const std::string& grantee_user_id);
  std::vector<EditGrant> grants_for(const std::string& entity_id) const;
  void drop_grants(const std::string& entity_id);
  bool has_grant(const std::string& entity_id, const std::string& user_id) const;

  std::optional<User> find_user(std::string_view user_id) const;
  /// Throws Error(unknown_user).
  User require_user(std::string_view user_id) const;
  std::optional<Organisation> find_org(std::string_view org_id) const;
  std::vector<User> users() const;
  std::vector<Organisation> organisations() const;
  void set_org_flags(const User& actor, const Organisation& flags);
  void set_password(const std::string& user_id, const std::string& secret);

  /// Returns a bearer token. Throws Error(authentication_failed).
  std::string login(const std::string& user_id, const std::string& secret);
  /// Resolves a token, refreshing its idle timer. nullopt when unknown or expired.
  std::optional<User> authenticate(const std::string& token);
  void logout(const std::string& token);

  PolicyState snapshot() const;

  /// admin/principals.xml
  void load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;
  std::string to_xml() const;
  void from_xml(std::string_view xml_text);

 private:
  std::string now_text() const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, User, std::less<>> users_;
  PolicyState state_;
  std::vector<EditGrant> grant_log_;
  struct Session {
    std::string user_id;
    std::chrono::system_clock::time_point last_seen;
  };
  std::map<std::string, Session> sessions_;
  Clock clock_;
  std::chrono::seconds idle_limit_{std::chrono::hours(12)};
};

std::string format_utc(std::chrono::system_clock::time_point tp);

}  // namespace scriptorium::access
