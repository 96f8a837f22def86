#include "scriptorium/access.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <mutex>

#include "scriptorium/error.hpp"
#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"
#include "scriptorium/xml.hpp"

namespace scriptorium::access {

namespace {

constexpr std::pair<Role, std::string_view> role_names[] = {
    {Role::system_admin, "system-admin"},
    {Role::org_admin, "org-admin"},
    {Role::editor, "editor"},
    {Role::guest, "guest"},
};

constexpr std::pair<Action, std::string_view> action_names[] = {
    {Action::view, "view"},
    {Action::create, "create"},
    {Action::edit, "edit"},
    {Action::remove, "delete"},
    {Action::request_publish, "request-publish"},
    {Action::approve_publish, "approve-publish"},
    {Action::manage_vocab, "manage-vocab"},
    {Action::manage_users, "manage-users"},
    {Action::manage_orgs, "manage-orgs"},
    {Action::grant_edit, "grant-edit"},
};

constexpr int kPbkdf2Iterations = 20000;

std::string to_hex(const unsigned char* data, size_t n) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    out += hex[data[i] >> 4];
    out += hex[data[i] & 0xF];
  }
  return out;
}

std::string random_hex(size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(bytes)) != 1) throw Error(Errc::io, "random source unavailable");
  return to_hex(buf.data(), bytes);
}

std::string pbkdf2(std::string_view secret, std::string_view salt, int iterations) {
  unsigned char out[32];
  if (PKCS5_PBKDF2_HMAC(secret.data(), static_cast<int>(secret.size()),
                        reinterpret_cast<const unsigned char*>(salt.data()), static_cast<int>(salt.size()), iterations,
                        EVP_sha256(), sizeof out, out) != 1)
    throw Error(Errc::io, "credential hashing failed");
  return to_hex(out, sizeof out);
}

bool same_org(const User& u, const Resource& r) { return !u.org_id.empty() && u.org_id == r.org_id; }

const Organisation* org_of(const PolicyState& s, const std::string& id) {
  auto it = s.orgs.find(id);
  return it == s.orgs.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view to_string(Role r) {
  for (const auto& [v, n] : role_names)
    if (v == r) return n;
  return "";
}

std::string_view to_string(Action a) {
  for (const auto& [v, n] : action_names)
    if (v == a) return n;
  return "";
}

std::optional<Role> role_from_string(std::string_view s) {
  for (const auto& [v, n] : role_names)
    if (n == s) return v;
  return std::nullopt;
}

std::optional<Action> action_from_string(std::string_view s) {
  for (const auto& [v, n] : action_names)
    if (n == s) return v;
  return std::nullopt;
}

Decision authorize(const User& user, Action action, const Resource& resource, const PolicyState& state) {
  if (user.role == Role::system_admin) return Decision::allow();
  if (action == Action::manage_orgs) return Decision::deny("insufficient-role");

  if (resource.scope == Resource::Scope::global) {
    switch (action) {
      case Action::view: return Decision::allow();
      case Action::manage_vocab:
        return user.role == Role::org_admin ? Decision::allow() : Decision::deny("insufficient-role");
      default: return Decision::deny("insufficient-role");
    }
  }

  if (!same_org(user, resource)) return Decision::deny("cross-org");

  const bool own = resource.scope == Resource::Scope::entity && resource.creator_user_id == user.user_id;
  const bool granted = resource.scope == Resource::Scope::entity &&
                       state.grants.count({resource.entity_id, user.user_id}) > 0;
  const Organisation* org = org_of(state, resource.org_id);

  if (user.role == Role::guest) {
    return action == Action::view ? Decision::allow() : Decision::deny("insufficient-role");
  }

  if (user.role == Role::org_admin) {
    switch (action) {
      case Action::edit:
        if (own || granted || org == nullptr || org->org_admins_edit_all) return Decision::allow();
        return Decision::deny("not-creator");
      case Action::view:
      case Action::create:
      case Action::remove:
      case Action::request_publish:
      case Action::approve_publish:
      case Action::manage_vocab:
      case Action::manage_users:
      case Action::grant_edit:
        return Decision::allow();
      case Action::manage_orgs: break;
    }
    return Decision::deny("insufficient-role");
  }

  // editor
  const bool edit_all = user.edit_all || (org != nullptr && org->editors_edit_all);
  switch (action) {
    case Action::view:
    case Action::create:
      return Decision::allow();
    case Action::edit:
      return (own || granted || edit_all) ? Decision::allow() : Decision::deny("not-creator");
    case Action::request_publish:
      return (own || granted) ? Decision::allow() : Decision::deny("not-creator");
    case Action::remove:
    case Action::grant_edit:
      return own ? Decision::allow() : Decision::deny("not-creator");
    default:
      return Decision::deny("insufficient-role");
  }
}

std::string hash_credential(std::string_view secret) {
  auto salt = random_hex(16);
  return "pbkdf2-sha256$" + std::to_string(kPbkdf2Iterations) + "$" + salt + "$" +
         pbkdf2(secret, salt, kPbkdf2Iterations);
}

bool verify_credential(std::string_view secret, std::string_view stored) {
  auto parts = text::split(stored, '$');
  if (parts.size() != 4 || parts[0] != "pbkdf2-sha256") return false;
  int iterations = 0;
  try {
    iterations = std::stoi(parts[1]);
  } catch (const std::exception&) {
    return false;
  }
  auto computed = pbkdf2(secret, parts[2], iterations);
  return computed.size() == parts[3].size() &&
         CRYPTO_memcmp(computed.data(), parts[3].data(), computed.size()) == 0;
}

std::string format_utc(std::chrono::system_clock::time_point tp) {
  auto t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AccessControl::AccessControl() : clock_([] { return std::chrono::system_clock::now(); }) {}

void AccessControl::set_clock(Clock clock) {
  std::unique_lock lock(mutex_);
  clock_ = std::move(clock);
}

void AccessControl::set_session_idle_limit(std::chrono::seconds limit) {
  std::unique_lock lock(mutex_);
  idle_limit_ = limit;
}

std::string AccessControl::now_text() const { return format_utc(clock_()); }

Decision AccessControl::authorize(const User& user, Action action, const Resource& resource) const {
  std::shared_lock lock(mutex_);
  return access::authorize(user, action, resource, state_);
}

Provisioned AccessControl::bootstrap_admin(const std::string& name, const std::string& secret) {
  std::unique_lock lock(mutex_);
  if (users_.count(name)) throw Error(Errc::duplicate_user, "user '" + name + "' already exists");
  User u;
  u.user_id = name;
  u.display_name = name;
  u.role = Role::system_admin;
  auto credential = secret.empty() ? random_hex(12) : secret;
  u.credential_hash = hash_credential(credential);
  users_[name] = u;
  return {name, credential};
}

Provisioned AccessControl::provision(const User& actor, const ProvisionCommand& command) {
  std::unique_lock lock(mutex_);
  if (const auto* org = std::get_if<CreateOrg>(&command)) {
    if (actor.role != Role::system_admin)
      throw Error(Errc::insufficient_role, "only system administrators create organisations");
    if (org->org_id.empty()) throw Error(Errc::bad_request, "organisation id is empty");
    if (state_.orgs.count(org->org_id))
      throw Error(Errc::duplicate_user, "organisation '" + org->org_id + "' already exists");
    Organisation o;
    o.org_id = org->org_id;
    o.name = org->name.empty() ? org->org_id : org->name;
    state_.orgs[o.org_id] = o;
    return {o.org_id, {}};
  }
  const auto& cmd = std::get<CreateUser>(command);
  if (cmd.name.empty() || cmd.name.find_first_of("@/ \t") != std::string::npos)
    throw Error(Errc::bad_request, "user name must be non-empty without '@', '/' or spaces");
  if (cmd.role == Role::system_admin) {
    if (actor.role != Role::system_admin)
      throw Error(Errc::insufficient_role, "only system administrators create system administrators");
  } else {
    if (!state_.orgs.count(cmd.org_id)) throw Error(Errc::unknown_org, "unknown organisation '" + cmd.org_id + "'");
    const bool allowed = actor.role == Role::system_admin ||
                         (actor.role == Role::org_admin && actor.org_id == cmd.org_id &&
                          (cmd.role == Role::editor || cmd.role == Role::guest));
    if (!allowed) throw Error(Errc::insufficient_role, "'" + actor.user_id + "' may not create this user");
  }
  User u;
  u.user_id = cmd.role == Role::system_admin ? cmd.name : cmd.name + "@" + cmd.org_id;
  if (users_.count(u.user_id))
    throw Error(Errc::duplicate_user, "user '" + cmd.name + "' already exists in '" + cmd.org_id + "'");
  u.display_name = cmd.display_name.empty() ? cmd.name : cmd.display_name;
  u.role = cmd.role;
  u.org_id = cmd.role == Role::system_admin ? std::string() : cmd.org_id;
  auto credential = random_hex(12);
  u.credential_hash = hash_credential(credential);
  users_[u.user_id] = u;
  return {u.user_id, credential};
}

EditGrant AccessControl::grant_edit(const User& granter, const Resource& entity, const std::string& grantee_user_id) {
  std::unique_lock lock(mutex_);
  auto d = access::authorize(granter, Action::grant_edit, entity, state_);
  if (!d) throw Error(Errc::permission_denied, "grant-edit denied: " + d.reason);
  auto it = users_.find(grantee_user_id);
  if (it == users_.end()) throw Error(Errc::unknown_user, "unknown user '" + grantee_user_id + "'");
  if (it->second.org_id != entity.org_id)
    throw Error(Errc::cross_org, "grantee '" + grantee_user_id + "' belongs to another organisation");
  EditGrant g{entity.entity_id, grantee_user_id, granter.user_id, now_text()};
  state_.grants.insert({entity.entity_id, grantee_user_id});
  std::erase_if(grant_log_, [&](const EditGrant& e) {
    return e.entity_id == g.entity_id && e.grantee_user_id == g.grantee_user_id;
  });
  grant_log_.push_back(g);
  return g;
}

void AccessControl::revoke_edit(const User& granter, const Resource& entity, const std::string& grantee_user_id) {
  std::unique_lock lock(mutex_);
  auto d = access::authorize(granter, Action::grant_edit, entity, state_);
  if (!d) throw Error(Errc::permission_denied, "revoke denied: " + d.reason);
  state_.grants.erase({entity.entity_id, grantee_user_id});
  std::erase_if(grant_log_, [&](const EditGrant& e) {
    return e.entity_id == entity.entity_id && e.grantee_user_id == grantee_user_id;
  });
}

std::vector<EditGrant> AccessControl::grants_for(const std::string& entity_id) const {
  std::shared_lock lock(mutex_);
  std::vector<EditGrant> out;
  for (const auto& g : grant_log_)
    if (g.entity_id == entity_id) out.push_back(g);
  return out;
}

void AccessControl::drop_grants(const std::string& entity_id) {
  std::unique_lock lock(mutex_);
  std::erase_if(state_.grants, [&](const auto& p) { return p.first == entity_id; });
  std::erase_if(grant_log_, [&](const EditGrant& e) { return e.entity_id == entity_id; });
}

bool AccessControl::has_grant(const std::string& entity_id, const std::string& user_id) const {
  std::shared_lock lock(mutex_);
  return state_.grants.count({entity_id, user_id}) > 0;
}

std::optional<User> AccessControl::find_user(std::string_view user_id) const {
  std::shared_lock lock(mutex_);
  auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

User AccessControl::require_user(std::string_view user_id) const {
  auto u = find_user(user_id);
  if (!u) throw Error(Errc::unknown_user, "unknown user '" + std::string(user_id) + "'");
  return *u;
}

std::optional<Organisation> AccessControl::find_org(std::string_view org_id) const {
  std::shared_lock lock(mutex_);
  auto it = state_.orgs.find(std::string(org_id));
  if (it == state_.orgs.end()) return std::nullopt;
  return it->second;
}

std::vector<User> AccessControl::users() const {
  std::shared_lock lock(mutex_);
  std::vector<User> out;
  for (const auto& [id, u] : users_) out.push_back(u);
  return out;
}

std::vector<Organisation> AccessControl::organisations() const {
  std::shared_lock lock(mutex_);
  std::vector<Organisation> out;
  for (const auto& [id, o] : state_.orgs) out.push_back(o);
  return out;
}

void AccessControl::set_org_flags(const User& actor, const Organisation& flags) {
  std::unique_lock lock(mutex_);
  auto it = state_.orgs.find(flags.org_id);
  if (it == state_.orgs.end()) throw Error(Errc::unknown_org, "unknown organisation '" + flags.org_id + "'");
  auto d = access::authorize(actor, Action::manage_users, Resource::organisation(flags.org_id), state_);
  if (!d) throw Error(Errc::permission_denied, "cannot configure organisation: " + d.reason);
  auto name = it->second.name;
  it->second = flags;
  if (it->second.name.empty()) it->second.name = name;
}

void AccessControl::set_password(const std::string& user_id, const std::string& secret) {
  std::unique_lock lock(mutex_);
  auto it = users_.find(user_id);
  if (it == users_.end()) throw Error(Errc::unknown_user, "unknown user '" + user_id + "'");
  it->second.credential_hash = hash_credential(secret);
}

std::string AccessControl::login(const std::string& user_id, const std::string& secret) {
  std::unique_lock lock(mutex_);
  auto it = users_.find(user_id);
  if (it == users_.end() || !verify_credential(secret, it->second.credential_hash))
    throw Error(Errc::authentication_failed, "invalid user or credential");
  auto token = random_hex(24);
  sessions_[token] = {user_id, clock_()};
  return token;
}

std::optional<User> AccessControl::authenticate(const std::string& token) {
  std::unique_lock lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  auto now = clock_();
  if (now - it->second.last_seen > idle_limit_) {
    sessions_.erase(it);
    return std::nullopt;
  }
  it->second.last_seen = now;
  auto u = users_.find(it->second.user_id);
  if (u == users_.end()) return std::nullopt;
  return u->second;
}

void AccessControl::logout(const std::string& token) {
  std::unique_lock lock(mutex_);
  sessions_.erase(token);
}

PolicyState AccessControl::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::string AccessControl::to_xml() const {
  std::shared_lock lock(mutex_);
  xml::Element root("principals");
  for (const auto& [id, o] : state_.orgs) {
    auto& e = root.add(xml::Element("org"));
    e.set("id", o.org_id);
    e.set("name", o.name);
    e.set("editorsEditAll", o.editors_edit_all ? "true" : "false");
    e.set("orgAdminsEditAll", o.org_admins_edit_all ? "true" : "false");
    e.set("publicRead", o.public_read ? "true" : "false");
  }
  for (const auto& [id, u] : users_) {
    auto& e = root.add(xml::Element("user"));
    e.set("id", u.user_id);
    e.set("name", u.display_name);
    e.set("role", std::string(to_string(u.role)));
    if (!u.org_id.empty()) e.set("org", u.org_id);
    if (u.edit_all) e.set("editAll", "true");
    e.set("credential", u.credential_hash);
  }
  for (const auto& g : grant_log_) {
    auto& e = root.add(xml::Element("grant"));
    e.set("entity", g.entity_id);
    e.set("grantee", g.grantee_user_id);
    e.set("grantedBy", g.granted_by);
    e.set("grantedAt", g.granted_at);
  }
  return xml::write(root);
}

void AccessControl::from_xml(std::string_view xml_text) {
  auto root = xml::parse(xml_text);
  if (root.name != "principals") throw Error(Errc::syntax, "expected <principals>");
  std::map<std::string, User, std::less<>> users;
  PolicyState state;
  std::vector<EditGrant> log;
  for (const auto& c : root.children) {
    if (c.name == "org") {
      Organisation o;
      o.org_id = c.attr_or("id", "");
      o.name = c.attr_or("name", o.org_id);
      o.editors_edit_all = c.attr_or("editorsEditAll", "false") == "true";
      o.org_admins_edit_all = c.attr_or("orgAdminsEditAll", "true") == "true";
      o.public_read = c.attr_or("publicRead", "false") == "true";
      state.orgs[o.org_id] = o;
    } else if (c.name == "user") {
      User u;
      u.user_id = c.attr_or("id", "");
      u.display_name = c.attr_or("name", u.user_id);
      auto role = role_from_string(c.attr_or("role", ""));
      if (!role) throw Error(Errc::syntax, "line " + std::to_string(c.line) + ": unknown role");
      u.role = *role;
      u.org_id = c.attr_or("org", "");
      u.edit_all = c.attr_or("editAll", "false") == "true";
      u.credential_hash = c.attr_or("credential", "");
      users[u.user_id] = u;
    } else if (c.name == "grant") {
      EditGrant g{c.attr_or("entity", ""), c.attr_or("grantee", ""), c.attr_or("grantedBy", ""),
                  c.attr_or("grantedAt", "")};
      state.grants.insert({g.entity_id, g.grantee_user_id});
      log.push_back(g);
    }
  }
  std::unique_lock lock(mutex_);
  users_ = std::move(users);
  state_ = std::move(state);
  grant_log_ = std::move(log);
}

void AccessControl::load(const std::filesystem::path& file) { from_xml(fileio::read_file(file)); }

void AccessControl::save(const std::filesystem::path& file) const { fileio::write_file_atomic(file, to_xml()); }

}  // namespace scriptorium::access
