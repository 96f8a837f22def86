#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scriptorium/access.hpp"
#include "scriptorium/chrono.hpp"
#include "scriptorium/error.hpp"
#include "scriptorium/schema.hpp"
#include "scriptorium/vocab.hpp"
#include "scriptorium/xml.hpp"

namespace scriptorium::docs {

using schema::FieldPath;

enum class Status { unpublished, pending, published };

std::string_view to_string(Status s);
std::optional<Status> status_from_string(std::string_view s);

struct EntityLink {
  std::string target_type;
  std::string target_id;
  std::string label;
  bool operator==(const EntityLink&) const = default;
};

struct TermRef {
  std::string vocab;
  std::string term_id;
  std::string label;
  bool operator==(const TermRef&) const = default;
};

struct ThesaurusRef {
  std::string thesaurus;
  std::string concept_id;
  std::string label;
  bool operator==(const ThesaurusRef&) const = default;
};

struct PlainText {
  std::string text;
  bool operator==(const PlainText&) const = default;
};

struct FormattedText {
  std::string markup;
  bool operator==(const FormattedText&) const = default;
};

struct NumberVal {
  double value = 0;
  bool operator==(const NumberVal&) const = default;
};

struct TimeVal {
  std::string expr;
  chrono::TimeSpan span;
  bool operator==(const TimeVal&) const = default;

  /// Parses and normalizes `expr`. Throws the chrono error on bad input.
  static TimeVal from(std::string expr, const chrono::NormalizeOptions& options = {});
};

struct LatLon {
  double lat = 0;
  double lon = 0;
  bool operator==(const LatLon&) const = default;
};

struct Coordinates {
  enum class Shape { point, polygon };
  Shape shape = Shape::point;
  std::vector<LatLon> points;
  bool operator==(const Coordinates&) const = default;
};

enum class PlaceSource { tgn, geonames };
std::string_view to_string(PlaceSource s);
std::optional<PlaceSource> place_source_from_string(std::string_view s);

struct ExternalPlace {
  PlaceSource source = PlaceSource::geonames;
  std::string external_id;
  double lat = 0;
  double lon = 0;
  bool operator==(const ExternalPlace&) const = default;
};

struct FileRef {
  std::string attachment_id;  // SHA-256 of the bytes
  std::string media;
  bool operator==(const FileRef&) const = default;
};

using FieldValue = std::variant<EntityLink, TermRef, ThesaurusRef, PlainText, FormattedText, NumberVal, TimeVal,
                                Coordinates, ExternalPlace, FileRef>;

schema::Kind kind_of(const FieldValue& v);
/// Human-readable rendering used by tables and keyword search.
std::string display_text(const FieldValue& v);
/// Decimal lexical form without exponent ("15", "2.5").
std::string decimal_lexical(double v);

struct EntityDocument {
  std::string id;
  std::string type_name;
  int schema_version = 1;
  std::string org_id;
  std::string creator_user_id;
  Status status = Status::unpublished;
  int revision = 0;
  std::map<FieldPath, FieldValue> values;

  const FieldValue* value(const FieldPath& path) const;
  const FieldValue* value(std::string_view path) const;
  access::Resource resource() const { return access::Resource::entity(org_id, creator_user_id, id); }

  bool operator==(const EntityDocument&) const = default;
};

struct VersionRecord {
  int version_number = 0;
  EntityDocument snapshot;
  std::string created_by;
  std::string created_at;
  std::string xml;  // export taken when the snapshot was made
};

/// Who produced each revision after creation.
struct RevisionRecord {
  std::string entity_id;
  int revision = 0;
  std::string actor;
  std::string at;
};

struct StatusChange {
  std::string entity_id;
  Status from = Status::unpublished;
  Status to = Status::unpublished;
  std::string actor;
  std::string at;
};

/// nullopt deletes the value (or the whole group instance) at `path`.
struct Edit {
  FieldPath path;
  std::optional<FieldValue> value;
};

struct Backlink {
  std::string referrer_id;
  FieldPath path;
  auto operator<=>(const Backlink&) const = default;
};

/// Adds [1] to multiple segments lacking an index and rejects indices on
/// singular ones. Throws schema_violation.
FieldPath canonical_path(const schema::EntityTypeSchema& schema, const FieldPath& path);

/// Values ordered as the schema tree orders leaves.
std::vector<std::pair<FieldPath, const FieldValue*>> ordered_values(const EntityDocument& doc,
                                                                   const schema::EntityTypeSchema& schema);

struct ValidationContext {
  const vocab::TermResolver* terms = nullptr;
  chrono::NormalizeOptions normalize;
  /// Required-field findings are errors when true (publish requests).
  bool require_complete = false;
};

std::vector<Issue> validate_document(const EntityDocument& doc, const schema::EntityTypeSchema& schema,
                                     const ValidationContext& context = {});

/// Removes `path` (leaf value or group instance) and shifts later siblings
/// down so indices stay contiguous.
void delete_instance(std::map<FieldPath, FieldValue>& values, const FieldPath& path);

// Interchange format
xml::Element entity_to_element(const EntityDocument& doc, const schema::EntityTypeSchema* schema);
std::string entity_to_xml(const EntityDocument& doc, const schema::EntityTypeSchema* schema);
EntityDocument entity_from_element(const xml::Element& root);
EntityDocument entity_from_xml(std::string_view xml_text);

struct ImportOptions {
  enum class Links { strict, lenient };
  Links links = Links::strict;
  bool preserve_id = false;
  /// Keep creator and status from the file instead of resetting them.
  bool keep_provenance = false;
};

struct ImportResult {
  EntityDocument document;
  std::vector<Backlink> dangling;  // paths whose link target is absent
};

struct DeleteReport {
  struct Deleted {
    std::string entity_id;
    std::vector<Backlink> dangling;
  };
  struct Failure {
    std::string entity_id;
    std::string code;
    std::string message;
  };
  std::vector<Deleted> deleted;
  std::vector<Failure> failures;

  size_t dangling_count() const;
};

struct Change {
  enum class Kind { created, updated, deleted };
  Kind kind = Kind::updated;
  std::string entity_id;
  std::shared_ptr<const EntityDocument> before;  // null on create
  std::shared_ptr<const EntityDocument> after;   // null on delete
};

/// Persistent store of entity documents. Reads are concurrent; writes to
/// one entity serialize on that entity's slot while distinct entities
/// proceed in parallel.
class DocumentStore {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;
  using Listener = std::function<void(const Change&)>;
  using BacklinkSource = std::function<std::vector<Backlink>(const std::string& entity_id)>;

  /// `data_dir` empty keeps everything in memory.
  DocumentStore(const schema::SchemaRegistry& schemas, access::AccessControl& access,
                const vocab::TermResolver* terms = nullptr, std::filesystem::path data_dir = {});
  ~DocumentStore();

  DocumentStore(const DocumentStore&) = delete;
  DocumentStore& operator=(const DocumentStore&) = delete;

  void set_clock(Clock clock);
  void add_listener(Listener listener);
  void set_backlink_source(BacklinkSource source);
  void set_normalize_options(chrono::NormalizeOptions options);

  /// Reads every document, version and counter from `data_dir`.
  void load();

  EntityDocument create_entity(const std::string& type_name, const std::string& org_id, const access::User& actor);
  int apply_field_edits(const std::string& entity_id, const std::vector<Edit>& edits, int expected_revision,
                        const access::User& actor);

  std::optional<EntityDocument> find(std::string_view entity_id) const;
  /// Throws unknown_entity.
  EntityDocument get(std::string_view entity_id) const;
  /// get() plus a view check.
  EntityDocument view(std::string_view entity_id, const access::User& actor) const;
  bool contains(std::string_view entity_id) const;
  std::vector<std::string> ids() const;
  size_t size() const;
  /// Copies every document; callers filter.
  std::vector<std::shared_ptr<const EntityDocument>> all() const;

  std::vector<Issue> validate(std::string_view entity_id) const;

  int snapshot_version(const std::string& entity_id, const access::User& actor);
  VersionRecord get_version(const std::string& entity_id, int version_number) const;
  std::vector<int> list_versions(const std::string& entity_id) const;

  Status transition_status(const std::string& entity_id, Status target, const access::User& actor);
  std::vector<StatusChange> status_log(const std::string& entity_id) const;
  std::vector<RevisionRecord> revision_log(const std::string& entity_id) const;

  std::string export_entity_xml(const std::string& entity_id, const access::User& actor) const;
  ImportResult import_entity_xml(std::string_view xml_text, const std::string& target_org, const access::User& actor,
                                 const ImportOptions& options = {});

  EntityDocument copy_entity(const std::string& entity_id, const access::User& actor);
  DeleteReport delete_entities(const std::vector<std::string>& entity_ids, const access::User& actor);

  /// Applies `fn` to the live values under the entity's write lock and
  /// bumps the revision when it returns true. Used by corpus-wide rewrites.
  bool rewrite(const std::string& entity_id, const std::function<bool(EntityDocument&)>& fn,
               const access::User& actor);

  /// Content-addressed, deduplicated. Returns the SHA-256 id.
  std::string put_attachment(std::string_view bytes);
  std::optional<std::string> get_attachment(const std::string& attachment_id) const;
  size_t attachment_count() const;

  /// Removes trash entries older than `max_age`.
  size_t purge_trash(std::chrono::hours max_age = std::chrono::hours(24 * 30));

  const schema::SchemaRegistry& schemas() const noexcept { return schemas_; }
  access::AccessControl& access() const noexcept { return access_; }
  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

 private:
  struct Slot {
    std::mutex mutex;
    std::shared_ptr<const EntityDocument> doc;
    std::vector<VersionRecord> versions;
    std::vector<StatusChange> log;
    std::vector<RevisionRecord> revisions;
  };

  std::shared_ptr<Slot> slot(std::string_view entity_id) const;
  std::string next_id(const schema::EntityTypeSchema& schema);
  void reserve_id(const std::string& id, const schema::EntityTypeSchema& schema);
  void check(const access::User& actor, access::Action action, const access::Resource& resource) const;
  void apply_edits(EntityDocument& doc, const schema::EntityTypeSchema& schema, const std::vector<Edit>& edits) const;
  void check_values(const EntityDocument& doc, const schema::EntityTypeSchema& schema) const;
  std::vector<Backlink> inbound(const std::string& entity_id) const;
  void notify(const Change& change) const;
  std::string now_text() const;

  std::filesystem::path entity_file(const EntityDocument& doc) const;
  std::filesystem::path version_dir(const EntityDocument& doc) const;
  void persist(const EntityDocument& doc) const;
  void persist_counters() const;
  void persist_log(const StatusChange& change) const;
  void record_revision(Slot& slot, const EntityDocument& doc, const access::User& actor) const;

  const schema::SchemaRegistry& schemas_;
  access::AccessControl& access_;
  const vocab::TermResolver* terms_;
  std::filesystem::path data_dir_;
  Clock clock_;
  chrono::NormalizeOptions normalize_;

  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>, std::less<>> slots_;
  std::map<std::string, long, std::less<>> counters_;  // per id prefix
  mutable std::mutex counter_file_mutex_;

  mutable std::shared_mutex attachment_mutex_;
  std::map<std::string, std::string> memory_attachments_;
  std::set<std::string> attachment_ids_;

  mutable std::shared_mutex hooks_mutex_;
  std::vector<Listener> listeners_;
  BacklinkSource backlinks_;
};

/// Links from `doc` to other entities, in path order.
std::vector<std::pair<FieldPath, EntityLink>> outbound_links(const EntityDocument& doc);

}  // namespace scriptorium::docs
