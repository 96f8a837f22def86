#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scriptorium/error.hpp"

namespace scriptorium::schema {

enum class Kind {
  entity_link,
  vocab_term,
  thesaurus_term,
  text_plain,
  text_formatted,
  number,
  time_expression,
  geo_coordinates,
  geo_external_id,
  digital_file,
};

inline constexpr Kind all_kinds[] = {
    Kind::entity_link,     Kind::vocab_term,      Kind::thesaurus_term, Kind::text_plain,
    Kind::text_formatted,  Kind::number,          Kind::time_expression, Kind::geo_coordinates,
    Kind::geo_external_id, Kind::digital_file,
};

std::string_view to_string(Kind k);
std::optional<Kind> kind_from_string(std::string_view s);

enum class VocabMode { static_, dynamic };

std::string_view to_string(VocabMode m);

struct FieldKind {
  Kind kind = Kind::text_plain;
  std::string vocab;                 // vocab_term
  VocabMode mode = VocabMode::dynamic;
  std::string thesaurus;             // thesaurus_term
  std::vector<std::string> targets;  // entity_link: permitted target types
  std::vector<std::string> media;    // digital_file: accepted media kinds

  bool operator==(const FieldKind&) const = default;
};

/// Display strings keyed by language tag.
using Labels = std::map<std::string, std::string>;

struct FieldDef {
  std::string name;
  Labels label;
  FieldKind kind;
  bool multiple = false;
  bool required = false;

  bool operator==(const FieldDef&) const = default;
};

struct GroupDef;
using Node = std::variant<GroupDef, FieldDef>;

struct GroupDef {
  std::string name;
  Labels label;
  bool multiple = false;
  std::vector<Node> children;

  bool operator==(const GroupDef&) const;
};

const std::string& node_name(const Node& n);
bool node_multiple(const Node& n);

struct PathSegment {
  std::string name;
  std::optional<int> index;  // 1-based

  auto operator<=>(const PathSegment&) const = default;
};

/// Address of a node in a schema tree, rendered `A/B[2]/C`.
class FieldPath {
 public:
  FieldPath() = default;
  explicit FieldPath(std::vector<PathSegment> segments) : segments_(std::move(segments)) {}

  /// Throws Error(Errc::malformed_path).
  static FieldPath parse(std::string_view text);

  const std::vector<PathSegment>& segments() const noexcept { return segments_; }
  std::vector<PathSegment>& segments() noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  size_t size() const noexcept { return segments_.size(); }
  const PathSegment& back() const { return segments_.back(); }

  std::string str() const;
  FieldPath without_indices() const;
  FieldPath prefix(size_t n) const;
  FieldPath child(std::string name, std::optional<int> index = std::nullopt) const;
  FieldPath concat(const FieldPath& tail) const;
  bool starts_with(const FieldPath& other) const;
  /// Segment names equal, ignoring indices.
  bool same_template(const FieldPath& other) const;

  auto operator<=>(const FieldPath&) const = default;
  bool operator==(const FieldPath&) const = default;

 private:
  std::vector<PathSegment> segments_;
};

struct MapConfig {
  std::vector<FieldPath> point_fields;
  std::vector<FieldPath> popup_fields;
  bool operator==(const MapConfig&) const = default;
};

struct EntityTypeSchema {
  std::string type_name;
  std::string id_prefix;
  int version = 1;
  std::string default_language = "en";
  Labels label;
  GroupDef root;
  std::vector<FieldPath> summary_columns;
  MapConfig map;

  bool operator==(const EntityTypeSchema&) const = default;
};

struct ResolvedNode {
  const GroupDef* group = nullptr;
  const FieldDef* field = nullptr;
};

/// Leaf in document order together with its index-free path.
struct LeafRef {
  FieldPath path;
  const FieldDef* def = nullptr;
};

EntityTypeSchema parse_schema(std::string_view xml_text);
std::string serialize_schema(const EntityTypeSchema& schema);

/// Follows segment names from the root. Throws no_such_segment or
/// index_on_singular_segment.
ResolvedNode resolve_field_path(const EntityTypeSchema& schema, const FieldPath& path);

/// Non-throwing lookup; both pointers null when absent.
ResolvedNode find_node(const EntityTypeSchema& schema, const FieldPath& path) noexcept;

std::vector<LeafRef> leaves(const EntityTypeSchema& schema);
size_t depth(const EntityTypeSchema& schema);

/// Sort key that orders concrete paths in schema (document) order.
std::vector<std::pair<int, int>> schema_order_key(const EntityTypeSchema& schema, const FieldPath& path);

/// What a schema may refer to.
struct Catalog {
  std::set<std::string> entity_types;
  std::map<std::string, VocabMode> vocabularies;
  std::set<std::string> thesauri;
};

std::vector<Issue> validate_schema(const EntityTypeSchema& schema, const Catalog& catalog);

struct Addition {
  FieldPath parent;  // empty == root
  Node node;
};

/// Additive evolution. Returns a copy with version + 1.
EntityTypeSchema extend_schema(const EntityTypeSchema& schema, const std::vector<Addition>& additions);

/// Number of entity-link leaves across the given schemas.
size_t count_link_fields(const std::vector<const EntityTypeSchema*>& schemas);
size_t count_fields_of_kind(const EntityTypeSchema& schema, Kind kind);

/// Holds every published revision of every entity type. Readers share a
/// lock; publishing replaces the latest pointer under an exclusive lock.
class SchemaRegistry {
 public:
  using Ptr = std::shared_ptr<const EntityTypeSchema>;

  /// Throws Error(schema_violation) unless version increases.
  void publish(EntityTypeSchema schema);

  Ptr latest(std::string_view type_name) const;
  Ptr at(std::string_view type_name, int version) const;
  /// Throws Error(unknown_type).
  Ptr require(std::string_view type_name) const;
  bool contains(std::string_view type_name) const;
  std::vector<std::string> type_names() const;
  std::vector<Ptr> all_latest() const;
  std::string type_for_prefix(std::string_view prefix) const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::vector<Ptr>, std::less<>> revisions_;
};

}  // namespace scriptorium::schema
