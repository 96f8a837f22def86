#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scriptorium/access.hpp"
#include "scriptorium/chrono.hpp"
#include "scriptorium/docs.hpp"
#include "scriptorium/schema.hpp"

namespace scriptorium::query {

using docs::Backlink;
using schema::FieldPath;

// Predicate paths are index-free templates; a predicate holds when any
// instance of the field satisfies it.
struct Equals {
  FieldPath path;
  std::string text;
  bool operator==(const Equals&) const = default;
};
struct Contains {
  FieldPath path;
  std::string text;
  bool operator==(const Contains&) const = default;
};
/// Vocabulary term or thesaurus concept id.
struct TermIs {
  FieldPath path;
  std::string term_id;
  bool operator==(const TermIs&) const = default;
};
/// Holds when a link (at `path`, or anywhere) targets one of `entity_ids`.
/// A set so staged queries can feed a previous result straight in.
struct LinksTo {
  std::optional<FieldPath> path;
  std::set<std::string> entity_ids;
  bool operator==(const LinksTo&) const = default;
};
struct DateWithin {
  FieldPath path;
  chrono::TimeSpan span;
  bool operator==(const DateWithin&) const = default;
};
struct DateOverlaps {
  FieldPath path;
  chrono::TimeSpan span;
  bool operator==(const DateOverlaps&) const = default;
};
struct StatusIs {
  docs::Status status = docs::Status::unpublished;
  bool operator==(const StatusIs&) const = default;
};
struct TypeIs {
  std::string type_name;
  bool operator==(const TypeIs&) const = default;
};

using Predicate = std::variant<Equals, Contains, TermIs, LinksTo, DateWithin, DateOverlaps, StatusIs, TypeIs>;
using Conjunction = std::vector<Predicate>;

/// Throws invalid_path or type_mismatch.
void validate_predicates(const schema::EntityTypeSchema& schema, const Conjunction& predicates);

bool matches(const docs::EntityDocument& doc, const Predicate& predicate);
bool matches_all(const docs::EntityDocument& doc, const Conjunction& predicates);

/// `{"predicates":[{"op":"term_is","path":..,"term":..}, ...]}` or a bare array.
Conjunction parse_predicates(std::string_view json_text);
std::string predicates_to_json(const Conjunction& predicates);

struct Row {
  std::string id;
  std::string type_name;
  std::string status;
  std::string creator;
  std::vector<std::string> cells;  // one per summary column
  bool operator==(const Row&) const = default;
};

struct Hit {
  std::string id;
  std::string type_name;
  size_t score = 0;
  bool operator==(const Hit&) const = default;
};

struct SavedQuery {
  std::string query_id;
  std::string name;
  std::string owner_user_id;
  std::string org_id;
  std::string type_name;
  Conjunction predicates;
  bool shared_with_org = false;
};

struct IndexStats {
  size_t entities = 0;
  size_t tokens = 0;
  size_t links = 0;
};

/// Derived indexes over the document store: tokens for keyword search,
/// term/type postings for advanced search, and the backlink table. All of
/// it can be rebuilt from the store at any time.
class QueryService {
 public:
  QueryService(docs::DocumentStore& store, access::AccessControl& access);

  /// Subscribes to store changes and serves as the store's backlink source.
  void attach();

  IndexStats rebuild_index();
  IndexStats stats() const;

  std::vector<Row> filter_rows(const std::string& type_name, std::string_view text, const access::User& viewer) const;
  std::vector<Hit> keyword_search(std::string_view text, const std::optional<std::set<std::string>>& types,
                                  const access::User& viewer) const;
  std::vector<std::string> advanced_search(const std::string& type_name, const Conjunction& predicates,
                                           const access::User& viewer) const;

  /// Targets of links leaving `sources` (at `path`, or any path), visible to viewer.
  std::set<std::string> link_targets(const std::set<std::string>& sources, const std::optional<FieldPath>& path,
                                     const access::User& viewer) const;

  std::set<Backlink> backlinks(const std::string& entity_id) const;
  /// The whole backlink table; used to compare incremental and rebuilt state.
  std::map<std::string, std::set<Backlink>> backlink_table() const;

  SavedQuery save_query(const std::string& name, const std::string& type_name, const Conjunction& predicates,
                        bool shared_with_org, const access::User& owner);
  std::vector<SavedQuery> list_queries(const access::User& user) const;
  std::vector<std::string> run_query(const std::string& query_id, const access::User& user) const;
  void delete_query(const std::string& query_id, const access::User& user);

  /// admin/queries.json
  void load_queries(const std::filesystem::path& file);
  void save_queries(const std::filesystem::path& file) const;
  void set_queries_file(std::filesystem::path file);

 private:
  struct Entry {
    std::shared_ptr<const docs::EntityDocument> doc;
    std::map<std::string, size_t> tokens;  // token -> occurrences
    std::vector<std::string> cells;
  };

  void index_locked(std::shared_ptr<const docs::EntityDocument> doc);
  void unindex_locked(const std::string& entity_id);
  void refresh_referrers_locked(const std::string& entity_id);
  std::string render_locked(const docs::FieldValue& value) const;
  void on_change(const docs::Change& change);
  bool visible(const access::User& viewer, const docs::EntityDocument& doc, const access::PolicyState& state) const;
  const SavedQuery& require_query(const std::string& query_id) const;
  bool can_run(const SavedQuery& q, const access::User& user) const;
  void persist_queries() const;

  docs::DocumentStore& store_;
  access::AccessControl& access_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, Entry, std::less<>> entries_;
  std::map<std::string, std::map<std::string, size_t>, std::less<>> token_postings_;  // token -> id -> count
  std::map<std::string, std::set<std::string>, std::less<>> type_postings_;
  std::map<std::string, std::set<std::string>, std::less<>> term_postings_;  // "path|term" -> ids
  std::map<std::string, std::set<Backlink>, std::less<>> backlinks_;

  mutable std::shared_mutex queries_mutex_;
  std::map<std::string, SavedQuery> queries_;
  long query_seq_ = 0;
  std::filesystem::path queries_file_;
};

}  // namespace scriptorium::query
