#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scriptorium/access.hpp"
#include "scriptorium/docs.hpp"
#include "scriptorium/geo.hpp"
#include "scriptorium/mapping.hpp"
#include "scriptorium/query.hpp"
#include "scriptorium/schema.hpp"
#include "scriptorium/vocab.hpp"

namespace scriptorium {

struct WorkspaceOptions {
  std::filesystem::path root;       // empty keeps everything in memory
  std::filesystem::path share_dir;  // seed schemas, vocabularies, mappings, fixtures
  std::string base_iri = "https://scriptorium.example.org";
  geo::GeoConfig geo;               // fixture file defaults to share/fixtures/gazetteer.tsv
};

struct MapPoint {
  double lat = 0;
  double lon = 0;
  bool operator==(const MapPoint&) const = default;
};

struct MapFeature {
  enum class Kind { point, line, line_set };
  Kind kind = Kind::point;
  /// point: one part with one coordinate; line: one part with two;
  /// line-set: one two-coordinate part per member line.
  std::vector<std::vector<MapPoint>> parts;
  std::vector<std::pair<std::string, std::string>> popup;  // field path -> text
  std::string source_entity_id;
  std::vector<std::string> members;  // line-set: the entity behind each part
  bool degenerate = false;           // a line whose ends coincide
};

std::string_view to_string(MapFeature::Kind k);

struct Unresolved {
  std::string entity_id;
  std::string reason;
  bool operator==(const Unresolved&) const = default;
};

struct FeatureCollection {
  std::vector<MapFeature> features;
  std::vector<Unresolved> unresolved;
};

struct ExportScope {
  std::optional<std::string> org_id;
  std::optional<std::string> type_name;
  std::vector<std::string> entity_ids;  // takes precedence when non-empty
};

enum class ExportFormat { xml, ntriples, turtle };
std::optional<ExportFormat> export_format_from_string(std::string_view s);

struct ExportOptions {
  ExportFormat format = ExportFormat::xml;
  /// Overrides the shipped mapping for its domain type.
  std::optional<mapping::MappingSpec> mapping;
  /// Ignore mappings; everything goes through the naive schema.
  bool naive_only = false;
};

/// Relative file name -> content, in deterministic order.
struct ExportArchive {
  std::map<std::string, std::string> files;
  std::vector<std::string> excluded;  // in scope but not viewable
  std::vector<std::string> naive_types;

  void write_to(const std::filesystem::path& dir) const;
};

/// Everything one installation needs, wired together: schemas, vocabularies,
/// principals, the document store, the query indexes, mappings and the
/// gazetteer client.
class Workspace {
 public:
  explicit Workspace(WorkspaceOptions options);
  ~Workspace();

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  /// Creates the directory layout and the first system administrator.
  static access::Provisioned init(const std::filesystem::path& root, const std::string& admin_name,
                                  const std::string& admin_secret = {});

  const WorkspaceOptions& options() const noexcept { return options_; }
  const std::string& base_iri() const noexcept { return options_.base_iri; }

  schema::SchemaRegistry& schemas() noexcept { return schemas_; }
  vocab::VocabularyService& vocabularies() noexcept { return vocab_; }
  access::AccessControl& access() noexcept { return access_; }
  docs::DocumentStore& store() noexcept { return *store_; }
  query::QueryService& query() noexcept { return *query_; }
  geo::GeoClient& geo();

  const std::map<std::string, mapping::MappingSpec>& mappings() const noexcept { return mappings_; }
  const mapping::OntologyTerms& ontology() const noexcept { return ontology_; }

  /// Writes principals and vocabularies under root/admin.
  void persist_admin() const;
  access::Provisioned provision(const access::User& actor, const access::ProvisionCommand& command);

  FeatureCollection assemble_map_features(const std::vector<std::string>& entity_ids, const access::User& viewer) const;

  rdf::Graph entity_graph(const docs::EntityDocument& doc, const ExportOptions& options = {}) const;
  /// Throws permission_denied listing the ids when an explicit id is not viewable.
  ExportArchive export_dataset(const ExportScope& scope, const ExportOptions& options, const access::User& viewer) const;

  /// Published entity of an organisation with public reads enabled.
  std::optional<docs::EntityDocument> public_view(const std::string& entity_id) const;

 private:
  void load_seeds();
  std::optional<MapPoint> resolve_point(const docs::EntityDocument& doc, int depth, const access::User& viewer,
                                        const access::PolicyState& state) const;
  std::optional<std::pair<MapPoint, MapPoint>> resolve_line(const docs::EntityDocument& doc, const access::User& viewer,
                                                            const access::PolicyState& state,
                                                            std::string* why) const;

  WorkspaceOptions options_;
  schema::SchemaRegistry schemas_;
  vocab::VocabularyService vocab_;
  access::AccessControl access_;
  std::unique_ptr<docs::DocumentStore> store_;
  std::unique_ptr<query::QueryService> query_;
  std::unique_ptr<geo::GeoClient> geo_;
  std::map<std::string, mapping::MappingSpec> mappings_;
  mapping::OntologyTerms ontology_;
};

}  // namespace scriptorium
