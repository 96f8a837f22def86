#include "scriptorium/workspace.hpp"

#include <algorithm>

#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium {

namespace fs = std::filesystem;
using docs::EntityDocument;

std::string_view to_string(MapFeature::Kind k) {
  switch (k) {
    case MapFeature::Kind::point: return "point";
    case MapFeature::Kind::line: return "line";
    case MapFeature::Kind::line_set: return "line-set";
  }
  return "point";
}

std::optional<ExportFormat> export_format_from_string(std::string_view s) {
  if (s == "xml") return ExportFormat::xml;
  if (s == "rdf-nt" || s == "nt" || s == "ntriples") return ExportFormat::ntriples;
  if (s == "rdf-ttl" || s == "ttl" || s == "turtle") return ExportFormat::turtle;
  return std::nullopt;
}

void ExportArchive::write_to(const fs::path& dir) const {
  for (const auto& [name, content] : files) fileio::write_file_atomic(dir / name, content);
}

Workspace::Workspace(WorkspaceOptions options) : options_(std::move(options)) {
  while (!options_.base_iri.empty() && options_.base_iri.back() == '/') options_.base_iri.pop_back();
  load_seeds();
  if (!options_.root.empty() && fs::exists(options_.root / "admin" / "principals.xml"))
    access_.load(options_.root / "admin" / "principals.xml");

  store_ = std::make_unique<docs::DocumentStore>(schemas_, access_, &vocab_, options_.root);
  if (!options_.root.empty()) store_->load();
  query_ = std::make_unique<query::QueryService>(*store_, access_);
  query_->attach();
  if (!options_.root.empty()) query_->load_queries(options_.root / "admin" / "queries.json");
  query_->rebuild_index();

  if (options_.geo.fixture_file.empty()) options_.geo.fixture_file = options_.share_dir / "fixtures" / "gazetteer.tsv";
}

Workspace::~Workspace() = default;

void Workspace::load_seeds() {
  const auto& share = options_.share_dir;
  if (share.empty()) return;

  std::vector<fs::path> files;
  if (fs::is_directory(share / "schemas"))
    for (const auto& e : fs::directory_iterator(share / "schemas"))
      if (e.path().extension() == ".xml") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) schemas_.publish(schema::parse_schema(fileio::read_file(f)));

  const auto admin = options_.root.empty() ? fs::path() : options_.root / "admin";
  if (!admin.empty() && fs::is_directory(admin)) vocab_.load(admin);
  auto known = vocab_.vocabulary_ids();
  if (fs::exists(share / "vocabularies" / "catalog.xml"))
    for (auto& v : vocab::load_seed_vocabularies(share / "vocabularies"))
      if (std::find(known.begin(), known.end(), v.vocab_id) == known.end()) vocab_.define_vocabulary(std::move(v));
  auto known_thesauri = vocab_.thesaurus_ids();
  if (fs::is_directory(share / "thesauri")) {
    files.clear();
    for (const auto& e : fs::directory_iterator(share / "thesauri"))
      if (e.path().extension() == ".xml") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto t = vocab::Thesaurus::from_xml(fileio::read_file(f));
      if (std::find(known_thesauri.begin(), known_thesauri.end(), t.id()) == known_thesauri.end())
        vocab_.define_thesaurus(std::move(t));
    }
  }

  mappings_ = mapping::load_mapping_dir(share / "mappings");
  if (fs::exists(share / "ontology" / "cidoc-crm.ttl"))
    ontology_ = mapping::load_ontology_terms(share / "ontology" / "cidoc-crm.ttl");
}

access::Provisioned Workspace::init(const fs::path& root, const std::string& admin_name,
                                    const std::string& admin_secret) {
  const auto principals = root / "admin" / "principals.xml";
  if (fs::exists(principals)) throw Error(Errc::collision, root.string() + " is already initialised");
  fs::create_directories(root / "admin");
  fs::create_directories(root / "data");
  access::AccessControl ac;
  auto p = ac.bootstrap_admin(admin_name, admin_secret);
  ac.save(principals);
  return p;
}

geo::GeoClient& Workspace::geo() {
  if (!geo_) geo_ = std::make_unique<geo::GeoClient>(geo::GeoClient::from_config(options_.geo));
  return *geo_;
}

void Workspace::persist_admin() const {
  if (options_.root.empty()) return;
  access_.save(options_.root / "admin" / "principals.xml");
  vocab_.save(options_.root / "admin");
}

access::Provisioned Workspace::provision(const access::User& actor, const access::ProvisionCommand& command) {
  auto p = access_.provision(actor, command);
  persist_admin();
  return p;
}

// ---------------------------------------------------------------------------
// Map features

namespace {

std::optional<MapPoint> point_of(const docs::FieldValue& v) {
  if (const auto* c = std::get_if<docs::Coordinates>(&v)) {
    if (c->points.empty()) return std::nullopt;
    // Polygons are shown at their vertex centroid.
    MapPoint p;
    size_t n = c->points.size();
    if (c->shape == docs::Coordinates::Shape::polygon && n > 1 && c->points.front() == c->points.back()) --n;
    for (size_t i = 0; i < n; ++i) {
      p.lat += c->points[i].lat;
      p.lon += c->points[i].lon;
    }
    p.lat /= static_cast<double>(n);
    p.lon /= static_cast<double>(n);
    return p;
  }
  if (const auto* e = std::get_if<docs::ExternalPlace>(&v)) return MapPoint{e->lat, e->lon};
  return std::nullopt;
}

std::vector<const docs::FieldValue*> values_at(const EntityDocument& doc, const schema::FieldPath& tmpl) {
  std::vector<const docs::FieldValue*> out;
  for (const auto& [path, v] : doc.values)
    if (path.same_template(tmpl)) out.push_back(&v);
  return out;
}

// Point fields holding entity links; two of them make the type a line.
std::vector<schema::FieldPath> link_point_fields(const schema::EntityTypeSchema& schema) {
  std::vector<schema::FieldPath> out;
  for (const auto& field : schema.map.point_fields) {
    auto node = schema::find_node(schema, field);
    if (node.field && node.field->kind.kind == schema::Kind::entity_link) out.push_back(field);
  }
  return out;
}

}  // namespace

std::optional<MapPoint> Workspace::resolve_point(const EntityDocument& doc, int depth, const access::User& viewer,
                                                 const access::PolicyState& state) const {
  auto schema = schemas_.latest(doc.type_name);
  if (!schema) return std::nullopt;
  for (const auto& field : schema->map.point_fields) {
    for (const auto* v : values_at(doc, field)) {
      if (auto p = point_of(*v)) return p;
      const auto* link = std::get_if<docs::EntityLink>(v);
      if (link == nullptr || depth <= 0) continue;
      auto target = store_->find(link->target_id);
      if (!target || !access::authorize(viewer, access::Action::view, target->resource(), state)) continue;
      if (auto p = resolve_point(*target, depth - 1, viewer, state)) return p;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<MapPoint, MapPoint>> Workspace::resolve_line(const EntityDocument& doc,
                                                                     const access::User& viewer,
                                                                     const access::PolicyState& state,
                                                                     std::string* why) const {
  auto schema = schemas_.latest(doc.type_name);
  const auto ends = schema ? link_point_fields(*schema) : std::vector<schema::FieldPath>{};
  if (ends.size() < 2) {
    *why = "not-a-line";
    return std::nullopt;
  }
  auto end_point = [&](const schema::FieldPath& field) -> std::optional<MapPoint> {
    for (const auto* v : values_at(doc, field)) {
      if (auto p = point_of(*v)) return p;
      if (const auto* link = std::get_if<docs::EntityLink>(v)) {
        auto target = store_->find(link->target_id);
        if (target && access::authorize(viewer, access::Action::view, target->resource(), state))
          if (auto p = resolve_point(*target, 1, viewer, state)) return p;
      }
    }
    return std::nullopt;
  };
  auto a = end_point(ends[0]);
  auto b = end_point(ends[1]);
  if (!a) *why = "missing-start";
  else if (!b) *why = "missing-end";
  if (!a || !b) return std::nullopt;
  return std::pair{*a, *b};
}

FeatureCollection Workspace::assemble_map_features(const std::vector<std::string>& entity_ids,
                                                   const access::User& viewer) const {
  const auto state = access_.snapshot();
  FeatureCollection out;
  std::set<std::string> seen;
  for (const auto& id : entity_ids) {
    if (!seen.insert(id).second) continue;
    auto doc = store_->find(id);
    if (!doc) {
      out.unresolved.push_back({id, "unknown-entity"});
      continue;
    }
    if (!access::authorize(viewer, access::Action::view, doc->resource(), state)) {
      out.unresolved.push_back({id, "not-visible"});
      continue;
    }
    auto schema = schemas_.latest(doc->type_name);
    const auto& points = schema->map.point_fields;
    const bool is_line = link_point_fields(*schema).size() >= 2;

    MapFeature f;
    f.source_entity_id = id;
    for (const auto& field : schema->map.popup_fields) {
      std::vector<std::string> parts;
      for (const auto* v : values_at(*doc, field)) parts.push_back(docs::display_text(*v));
      if (!parts.empty()) f.popup.emplace_back(field.str(), text::join(parts, "; "));
    }

    bool line_set = false;
    if (points.size() == 1) {
      auto node = schema::find_node(*schema, points.front());
      if (node.field && node.field->kind.kind == schema::Kind::entity_link && !node.field->kind.targets.empty()) {
        auto target_schema = schemas_.latest(node.field->kind.targets.front());
        line_set = target_schema && link_point_fields(*target_schema).size() >= 2;
      }
    }

    if (is_line) {
      std::string why;
      auto line = resolve_line(*doc, viewer, state, &why);
      if (!line) {
        out.unresolved.push_back({id, why});
        continue;
      }
      f.kind = MapFeature::Kind::line;
      f.parts.push_back({line->first, line->second});
      f.degenerate = line->first == line->second;
    } else if (line_set) {
      f.kind = MapFeature::Kind::line_set;
      for (const auto* v : values_at(*doc, points.front())) {
        const auto* link = std::get_if<docs::EntityLink>(v);
        if (link == nullptr) continue;
        auto member = store_->find(link->target_id);
        if (!member) {
          out.unresolved.push_back({link->target_id, "unknown-entity"});
          continue;
        }
        if (!access::authorize(viewer, access::Action::view, member->resource(), state)) {
          out.unresolved.push_back({link->target_id, "not-visible"});
          continue;
        }
        std::string why;
        if (auto line = resolve_line(*member, viewer, state, &why)) {
          f.parts.push_back({line->first, line->second});
          f.members.push_back(member->id);
          if (line->first == line->second) f.degenerate = true;
        } else {
          out.unresolved.push_back({member->id, why});
        }
      }
      if (f.parts.empty()) {
        out.unresolved.push_back({id, "no-resolvable-members"});
        continue;
      }
    } else {
      auto p = resolve_point(*doc, 1, viewer, state);
      if (!p) {
        out.unresolved.push_back({id, "no-coordinates"});
        continue;
      }
      f.kind = MapFeature::Kind::point;
      f.parts.push_back({*p});
    }
    out.features.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

rdf::Graph Workspace::entity_graph(const EntityDocument& doc, const ExportOptions& options) const {
  if (!options.naive_only) {
    if (options.mapping && options.mapping->domain.source_type == doc.type_name)
      return mapping::transform_entity(doc, *options.mapping, options_.base_iri);
    if (auto it = mappings_.find(doc.type_name); it != mappings_.end())
      return mapping::transform_entity(doc, it->second, options_.base_iri);
  }
  return mapping::naive_export(doc, options_.base_iri);
}

ExportArchive Workspace::export_dataset(const ExportScope& scope, const ExportOptions& options,
                                        const access::User& viewer) const {
  const auto state = access_.snapshot();
  ExportArchive archive;
  std::vector<std::shared_ptr<const EntityDocument>> selected;

  auto viewable = [&](const EntityDocument& d) {
    return access::authorize(viewer, access::Action::view, d.resource(), state).allowed;
  };
  if (!scope.entity_ids.empty()) {
    std::set<std::string> ids(scope.entity_ids.begin(), scope.entity_ids.end());
    for (const auto& id : ids) {
      auto doc = store_->find(id);
      if (!doc) throw Error(Errc::unknown_entity, "unknown entity '" + id + "'");
      if (!viewable(*doc)) archive.excluded.push_back(id);
      else selected.push_back(std::make_shared<const EntityDocument>(std::move(*doc)));
    }
    if (!archive.excluded.empty())
      throw Error(Errc::permission_denied, "export includes entities the caller may not view", archive.excluded);
  } else {
    for (auto& doc : store_->all()) {
      if (scope.org_id && doc->org_id != *scope.org_id) continue;
      if (scope.type_name && doc->type_name != *scope.type_name) continue;
      if (viewable(*doc)) selected.push_back(std::move(doc));
      else archive.excluded.push_back(doc->id);
    }
    std::sort(archive.excluded.begin(), archive.excluded.end());
  }
  std::sort(selected.begin(), selected.end(), [](const auto& a, const auto& b) { return a->id < b->id; });

  if (options.format == ExportFormat::xml) {
    for (const auto& doc : selected) {
      auto schema = schemas_.at(doc->type_name, doc->schema_version);
      archive.files[doc->type_name + "/" + doc->id + ".xml"] = docs::entity_to_xml(*doc, schema.get());
    }
    return archive;
  }

  rdf::Graph graph;
  rdf::Prefixes prefixes = rdf::standard_prefixes();
  std::set<std::string> naive;
  for (const auto& doc : selected) {
    graph.merge(entity_graph(*doc, options));
    bool mapped = !options.naive_only && ((options.mapping && options.mapping->domain.source_type == doc->type_name) ||
                                          mappings_.count(doc->type_name));
    if (!mapped) naive.insert(doc->type_name);
  }
  for (const auto& [type, spec] : mappings_) prefixes.insert(spec.prefixes.begin(), spec.prefixes.end());
  if (options.mapping) prefixes.insert(options.mapping->prefixes.begin(), options.mapping->prefixes.end());
  if (!naive.empty()) prefixes.emplace("naive", mapping::naive_namespace(options_.base_iri));
  archive.naive_types.assign(naive.begin(), naive.end());
  if (options.format == ExportFormat::ntriples)
    archive.files["dataset.nt"] = rdf::to_ntriples(graph);
  else
    archive.files["dataset.ttl"] = rdf::to_turtle(graph, prefixes);
  return archive;
}

std::optional<EntityDocument> Workspace::public_view(const std::string& entity_id) const {
  auto doc = store_->find(entity_id);
  if (!doc || doc->status != docs::Status::published) return std::nullopt;
  auto org = access_.find_org(doc->org_id);
  if (!org || !org->public_read) return std::nullopt;
  return doc;
}

}  // namespace scriptorium
