#include "scriptorium/docs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium::docs {

namespace fs = std::filesystem;
using schema::EntityTypeSchema;
using schema::FieldDef;
using schema::GroupDef;
using schema::Kind;
using schema::Node;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::unpublished: return "unpublished";
    case Status::pending: return "pending";
    case Status::published: return "published";
  }
  return "unpublished";
}

std::optional<Status> status_from_string(std::string_view s) {
  if (s == "unpublished") return Status::unpublished;
  if (s == "pending") return Status::pending;
  if (s == "published") return Status::published;
  return std::nullopt;
}

std::string_view to_string(PlaceSource s) { return s == PlaceSource::tgn ? "tgn" : "geonames"; }

std::optional<PlaceSource> place_source_from_string(std::string_view s) {
  if (s == "tgn") return PlaceSource::tgn;
  if (s == "geonames") return PlaceSource::geonames;
  return std::nullopt;
}

TimeVal TimeVal::from(std::string expr, const chrono::NormalizeOptions& options) {
  auto span = chrono::normalize(expr, options);
  return {std::move(expr), span};
}

std::string decimal_lexical(double v) {
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) return text::format_double(v);
  std::string out(buf, end);
  if (out == "-0") out = "0";
  return out;
}

schema::Kind kind_of(const FieldValue& v) {
  static constexpr Kind by_index[] = {Kind::entity_link,     Kind::vocab_term,     Kind::thesaurus_term,
                                      Kind::text_plain,      Kind::text_formatted, Kind::number,
                                      Kind::time_expression, Kind::geo_coordinates, Kind::geo_external_id,
                                      Kind::digital_file};
  return by_index[v.index()];
}

namespace {

std::string coords_text(const Coordinates& c) {
  std::string out;
  for (size_t i = 0; i < c.points.size(); ++i) {
    if (i) out += ';';
    out += text::format_double(c.points[i].lat) + "," + text::format_double(c.points[i].lon);
  }
  return out;
}

Coordinates parse_coords(std::string_view kind, std::string_view body) {
  Coordinates c;
  if (kind == "point")
    c.shape = Coordinates::Shape::point;
  else if (kind == "polygon")
    c.shape = Coordinates::Shape::polygon;
  else
    throw Error(Errc::syntax, "unknown geo kind '" + std::string(kind) + "'");
  for (const auto& pair : text::split(text::trim(body), ';')) {
    auto ll = text::split(pair, ',');
    if (ll.size() != 2) throw Error(Errc::syntax, "coordinates must be lat,lon pairs");
    c.points.push_back({text::parse_double(text::trim(ll[0])), text::parse_double(text::trim(ll[1]))});
  }
  return c;
}

bool valid_lat_lon(double lat, double lon) {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90 && lat <= 90 && lon >= -180 && lon <= 180;
}

const Node* child_named(const GroupDef& g, std::string_view name) {
  for (const auto& c : g.children)
    if (schema::node_name(c) == name) return &c;
  return nullptr;
}

}  // namespace

std::string display_text(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EntityLink>) return x.label.empty() ? x.target_id : x.label;
        else if constexpr (std::is_same_v<T, TermRef>) return x.label.empty() ? x.term_id : x.label;
        else if constexpr (std::is_same_v<T, ThesaurusRef>) return x.label.empty() ? x.concept_id : x.label;
        else if constexpr (std::is_same_v<T, PlainText>) return x.text;
        else if constexpr (std::is_same_v<T, FormattedText>) return x.markup;
        else if constexpr (std::is_same_v<T, NumberVal>) return decimal_lexical(x.value);
        else if constexpr (std::is_same_v<T, TimeVal>) return x.expr;
        else if constexpr (std::is_same_v<T, Coordinates>) return coords_text(x);
        else if constexpr (std::is_same_v<T, ExternalPlace>)
          return std::string(to_string(x.source)) + ":" + x.external_id;
        else return x.attachment_id;
      },
      v);
}

const FieldValue* EntityDocument::value(const FieldPath& path) const {
  auto it = values.find(path);
  return it == values.end() ? nullptr : &it->second;
}

const FieldValue* EntityDocument::value(std::string_view path) const { return value(FieldPath::parse(path)); }

FieldPath canonical_path(const EntityTypeSchema& schema, const FieldPath& path) {
  if (path.empty()) throw Error(Errc::schema_violation, "empty field path");
  FieldPath out = path;
  const GroupDef* group = &schema.root;
  for (size_t i = 0; i < out.size(); ++i) {
    auto& seg = out.segments()[i];
    const Node* n = group ? child_named(*group, seg.name) : nullptr;
    if (n == nullptr)
      throw Error(Errc::schema_violation, "unknown path '" + path.str() + "' in " + schema.type_name);
    if (schema::node_multiple(*n)) {
      if (!seg.index) seg.index = 1;
    } else if (seg.index) {
      throw Error(Errc::schema_violation, "index on singular segment '" + seg.name + "' in '" + path.str() + "'");
    }
    group = std::get_if<GroupDef>(n);
  }
  return out;
}

std::vector<std::pair<FieldPath, const FieldValue*>> ordered_values(const EntityDocument& doc,
                                                                   const EntityTypeSchema& schema) {
  std::vector<std::pair<std::vector<std::pair<int, int>>, std::pair<FieldPath, const FieldValue*>>> keyed;
  keyed.reserve(doc.values.size());
  for (const auto& [path, value] : doc.values)
    keyed.push_back({schema::schema_order_key(schema, path), {path, &value}});
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<FieldPath, const FieldValue*>> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_value(const FieldPath& path, const FieldValue& value, const FieldDef& def, const ValidationContext& ctx,
                 std::vector<Issue>& issues) {
  const auto p = path.str();
  auto err = [&](std::string code, std::string msg) {
    issues.push_back({Severity::error, std::move(code), p, std::move(msg)});
  };
  if (kind_of(value) != def.kind.kind) {
    err("kind-mismatch", "field is " + std::string(schema::to_string(def.kind.kind)) + ", value is " +
                             std::string(schema::to_string(kind_of(value))));
    return;
  }
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EntityLink>) {
          const auto& targets = def.kind.targets;
          if (std::find(targets.begin(), targets.end(), x.target_type) == targets.end())
            err("invalid-link-target", "links to " + x.target_type + " are not permitted here");
          if (x.target_id.empty()) err("empty-value", "link without target id");
        } else if constexpr (std::is_same_v<T, TermRef>) {
          if (x.vocab != def.kind.vocab) err("kind-mismatch", "term from '" + x.vocab + "', field uses '" + def.kind.vocab + "'");
          if (x.term_id.empty()) err("empty-value", "term without id");
          if (ctx.terms != nullptr && !x.term_id.empty() && !ctx.terms->term_exists(x.vocab, x.term_id)) {
            auto mode = ctx.terms->vocabulary_mode(x.vocab);
            if (mode == schema::VocabMode::static_)
              err("term-not-in-static-vocabulary", "'" + x.term_id + "' is not in static vocabulary '" + x.vocab + "'");
            else
              err("unknown-term", "'" + x.term_id + "' is not in vocabulary '" + x.vocab + "'");
          }
        } else if constexpr (std::is_same_v<T, ThesaurusRef>) {
          if (x.thesaurus != def.kind.thesaurus) err("kind-mismatch", "concept from another thesaurus");
          if (ctx.terms != nullptr && !ctx.terms->concept_exists(x.thesaurus, x.concept_id))
            err("unknown-concept", "'" + x.concept_id + "' is not in thesaurus '" + x.thesaurus + "'");
        } else if constexpr (std::is_same_v<T, PlainText>) {
          if (text::trim(x.text).empty()) err("empty-value", "text is empty");
          if (!xml::is_valid_xml_text(x.text)) err("invalid-text", "text contains characters XML cannot carry");
        } else if constexpr (std::is_same_v<T, FormattedText>) {
          if (text::trim(x.markup).empty()) err("empty-value", "text is empty");
          if (!xml::is_valid_xml_text(x.markup)) err("invalid-text", "text contains characters XML cannot carry");
        } else if constexpr (std::is_same_v<T, NumberVal>) {
          if (!std::isfinite(x.value)) err("invalid-number", "number must be finite");
        } else if constexpr (std::is_same_v<T, TimeVal>) {
          try {
            if (chrono::normalize(x.expr, ctx.normalize) != x.span)
              err("stale-normalization", "stored span does not match '" + x.expr + "'");
          } catch (const Error& e) {
            err("invalid-time-expression", e.what());
          }
        } else if constexpr (std::is_same_v<T, Coordinates>) {
          if (x.points.empty()) err("empty-value", "no coordinates");
          if (x.shape == Coordinates::Shape::point && x.points.size() != 1)
            err("invalid-geometry", "a point has exactly one coordinate pair");
          if (x.shape == Coordinates::Shape::polygon && x.points.size() < 3)
            err("invalid-geometry", "a polygon needs at least three vertices");
          for (const auto& ll : x.points)
            if (!valid_lat_lon(ll.lat, ll.lon)) err("coordinates-out-of-range", "latitude or longitude out of range");
        } else if constexpr (std::is_same_v<T, ExternalPlace>) {
          if (x.external_id.empty()) err("empty-value", "external place without id");
          if (!valid_lat_lon(x.lat, x.lon)) err("coordinates-out-of-range", "latitude or longitude out of range");
        } else {
          if (x.attachment_id.empty()) err("empty-value", "file reference without id");
          const auto& media = def.kind.media;
          if (!media.empty() && std::find(media.begin(), media.end(), x.media) == media.end())
            err("media-not-accepted", "media kind '" + x.media + "' not accepted");
        }
      },
      value);
}

// Concrete instantiations of `tmpl` (index-free) present in `values`, with
// multiple segments expanded over the indices in use. A multiple leaf is
// expanded to at least one instance so missing required leaves show up.
void instantiate(const GroupDef& group, const FieldPath& tmpl, size_t at, const FieldPath& prefix,
                 const std::map<FieldPath, FieldValue>& values, std::vector<FieldPath>& out) {
  const auto& seg = tmpl.segments()[at];
  const Node* n = child_named(group, seg.name);
  if (n == nullptr) return;
  const bool last = at + 1 == tmpl.size();
  if (!schema::node_multiple(*n)) {
    auto next = prefix.child(seg.name);
    if (last)
      out.push_back(next);
    else if (const auto* g = std::get_if<GroupDef>(n))
      instantiate(*g, tmpl, at + 1, next, values, out);
    return;
  }
  std::set<int> present;
  for (auto it = values.lower_bound(prefix); it != values.end() && it->first.starts_with(prefix); ++it) {
    if (it->first.size() <= prefix.size()) continue;
    const auto& s = it->first.segments()[prefix.size()];
    if (s.name == seg.name && s.index) present.insert(*s.index);
  }
  if (present.empty() && last) present.insert(1);
  for (int idx : present) {
    auto next = prefix.child(seg.name, idx);
    if (last)
      out.push_back(next);
    else if (const auto* g = std::get_if<GroupDef>(n))
      instantiate(*g, tmpl, at + 1, next, values, out);
  }
}

}  // namespace

std::vector<Issue> validate_document(const EntityDocument& doc, const EntityTypeSchema& schema,
                                     const ValidationContext& context) {
  std::vector<Issue> issues;
  if (doc.type_name != schema.type_name)
    issues.push_back({Severity::error, "type-mismatch", "", "document type " + doc.type_name + " vs schema " + schema.type_name});

  // Each concrete (parent instance, multiple child name) gets its index set.
  std::map<std::pair<FieldPath, std::string>, std::set<int>> index_sets;

  for (const auto& [path, value] : doc.values) {
    const GroupDef* group = &schema.root;
    const FieldDef* leaf = nullptr;
    bool ok = true;
    for (size_t i = 0; i < path.size() && ok; ++i) {
      const auto& seg = path.segments()[i];
      const Node* n = group ? child_named(*group, seg.name) : nullptr;
      if (n == nullptr) {
        issues.push_back({Severity::error, "unknown-path", path.str(), "path does not resolve in " + schema.type_name});
        ok = false;
      } else if (seg.index && !schema::node_multiple(*n)) {
        issues.push_back({Severity::error, "index-on-singular-segment", path.str(), "'" + seg.name + "' is not multiple"});
        ok = false;
      } else if (!seg.index && schema::node_multiple(*n)) {
        issues.push_back({Severity::error, "missing-index", path.str(), "'" + seg.name + "' is multiple and needs an index"});
        ok = false;
      } else {
        if (seg.index) index_sets[{path.prefix(i), seg.name}].insert(*seg.index);
        group = std::get_if<GroupDef>(n);
        leaf = std::get_if<FieldDef>(n);
      }
    }
    if (!ok) continue;
    if (leaf == nullptr) {
      issues.push_back({Severity::error, "not-a-leaf", path.str(), "values attach to fields, not groups"});
      continue;
    }
    check_value(path, value, *leaf, context, issues);
  }

  for (const auto& [key, indices] : index_sets) {
    int expect = 1;
    for (int i : indices) {
      if (i != expect) {
        issues.push_back({Severity::error, "non-contiguous-indices", key.first.child(key.second).str(),
                          "indices must run 1.." + std::to_string(indices.size())});
        break;
      }
      ++expect;
    }
  }

  const auto sev = context.require_complete ? Severity::error : Severity::warning;
  for (const auto& leaf : schema::leaves(schema)) {
    if (!leaf.def->required) continue;
    std::vector<FieldPath> instances;
    instantiate(schema.root, leaf.path, 0, FieldPath{}, doc.values, instances);
    for (const auto& p : instances)
      if (!doc.values.count(p)) issues.push_back({sev, "required-missing", p.str(), "required field is empty"});
  }
  return issues;
}

void delete_instance(std::map<FieldPath, FieldValue>& values, const FieldPath& path) {
  for (auto it = values.lower_bound(path); it != values.end() && it->first.starts_with(path);) it = values.erase(it);
  const auto& last = path.back();
  if (!last.index) return;
  const size_t pos = path.size() - 1;
  const auto parent = path.prefix(pos);
  std::map<FieldPath, FieldValue> shifted;
  for (auto it = values.lower_bound(parent); it != values.end() && it->first.starts_with(parent);) {
    const auto& seg = it->first.segments()[pos < it->first.size() ? pos : 0];
    if (it->first.size() > pos && seg.name == last.name && seg.index && *seg.index > *last.index) {
      auto key = it->first;
      key.segments()[pos].index = *seg.index - 1;
      shifted.emplace(std::move(key), std::move(it->second));
      it = values.erase(it);
    } else {
      ++it;
    }
  }
  values.merge(shifted);
}

std::vector<std::pair<FieldPath, EntityLink>> outbound_links(const EntityDocument& doc) {
  std::vector<std::pair<FieldPath, EntityLink>> out;
  for (const auto& [path, value] : doc.values)
    if (const auto* l = std::get_if<EntityLink>(&value)) out.emplace_back(path, *l);
  return out;
}

// ---------------------------------------------------------------------------
// Interchange XML

namespace {

xml::Element value_element(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> xml::Element {
        using T = std::decay_t<decltype(x)>;
        xml::Element e;
        if constexpr (std::is_same_v<T, EntityLink>) {
          e.name = "link";
          e.set("type", x.target_type).set("id", x.target_id);
          e.text = x.label;
        } else if constexpr (std::is_same_v<T, TermRef>) {
          e.name = "term";
          e.set("vocab", x.vocab).set("id", x.term_id);
          e.text = x.label;
        } else if constexpr (std::is_same_v<T, ThesaurusRef>) {
          e.name = "concept";
          e.set("thesaurus", x.thesaurus).set("id", x.concept_id);
          e.text = x.label;
        } else if constexpr (std::is_same_v<T, PlainText>) {
          e.name = "text";
          e.text = x.text;
        } else if constexpr (std::is_same_v<T, FormattedText>) {
          e.name = "richtext";
          e.text = x.markup;
        } else if constexpr (std::is_same_v<T, NumberVal>) {
          e.name = "number";
          e.text = text::format_double(x.value);
        } else if constexpr (std::is_same_v<T, TimeVal>) {
          e.name = "timespan";
          e.set("expr", x.expr)
              .set("earliest", std::to_string(x.span.earliest))
              .set("latest", std::to_string(x.span.latest));
        } else if constexpr (std::is_same_v<T, Coordinates>) {
          e.name = "geo";
          e.set("kind", x.shape == Coordinates::Shape::point ? "point" : "polygon");
          e.text = coords_text(x);
        } else if constexpr (std::is_same_v<T, ExternalPlace>) {
          e.name = "place";
          e.set("source", std::string(to_string(x.source)))
              .set("id", x.external_id)
              .set("lat", text::format_double(x.lat))
              .set("lon", text::format_double(x.lon));
        } else {
          e.name = "file";
          e.set("ref", x.attachment_id).set("media", x.media);
        }
        return e;
      },
      v);
}

std::string need(const xml::Element& e, std::string_view attr) {
  auto v = e.attr(attr);
  if (!v)
    throw Error(Errc::syntax, "line " + std::to_string(e.line) + ": <" + e.name + "> lacks '" + std::string(attr) + "'");
  return std::string(*v);
}

int parse_int(const xml::Element& e, std::string_view attr) {
  auto s = need(e, attr);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(Errc::syntax, "line " + std::to_string(e.line) + ": '" + std::string(attr) + "' is not an integer");
  return v;
}

FieldValue value_from_element(const xml::Element& e) {
  if (e.name == "link") return EntityLink{need(e, "type"), need(e, "id"), e.text};
  if (e.name == "term") return TermRef{need(e, "vocab"), need(e, "id"), e.text};
  if (e.name == "concept") return ThesaurusRef{need(e, "thesaurus"), need(e, "id"), e.text};
  if (e.name == "text") return PlainText{e.text};
  if (e.name == "richtext") return FormattedText{e.text};
  if (e.name == "number") return NumberVal{text::parse_double(text::trim(e.text))};
  if (e.name == "timespan")
    return TimeVal{need(e, "expr"), chrono::TimeSpan{parse_int(e, "earliest"), parse_int(e, "latest")}};
  if (e.name == "geo") return parse_coords(e.attr_or("kind", "point"), e.text);
  if (e.name == "place") {
    auto src = place_source_from_string(need(e, "source"));
    if (!src) throw Error(Errc::unknown_source, "unknown place source '" + need(e, "source") + "'");
    return ExternalPlace{*src, need(e, "id"), text::parse_double(need(e, "lat")), text::parse_double(need(e, "lon"))};
  }
  if (e.name == "file") return FileRef{need(e, "ref"), e.attr_or("media", "")};
  throw Error(Errc::syntax, "line " + std::to_string(e.line) + ": unknown value element <" + e.name + ">");
}

}  // namespace

xml::Element entity_to_element(const EntityDocument& doc, const EntityTypeSchema* schema) {
  xml::Element root("entity");
  root.set("type", doc.type_name)
      .set("id", doc.id)
      .set("org", doc.org_id)
      .set("creator", doc.creator_user_id)
      .set("status", std::string(to_string(doc.status)))
      .set("schemaVersion", std::to_string(doc.schema_version))
      .set("revision", std::to_string(doc.revision));
  auto emit = [&](const FieldPath& path, const FieldValue& value) {
    xml::Element f("field");
    f.set("path", path.str());
    f.add(value_element(value));
    root.add(std::move(f));
  };
  if (schema != nullptr) {
    for (const auto& [path, value] : ordered_values(doc, *schema)) emit(path, *value);
  } else {
    for (const auto& [path, value] : doc.values) emit(path, value);
  }
  return root;
}

std::string entity_to_xml(const EntityDocument& doc, const EntityTypeSchema* schema) {
  return xml::write(entity_to_element(doc, schema));
}

EntityDocument entity_from_element(const xml::Element& root) {
  if (root.name != "entity") throw Error(Errc::syntax, "expected <entity> root, got <" + root.name + ">");
  EntityDocument doc;
  doc.type_name = need(root, "type");
  doc.id = root.attr_or("id", "");
  doc.org_id = root.attr_or("org", "");
  doc.creator_user_id = root.attr_or("creator", "");
  auto st = status_from_string(root.attr_or("status", "unpublished"));
  if (!st) throw Error(Errc::syntax, "unknown status '" + root.attr_or("status", "") + "'");
  doc.status = *st;
  doc.schema_version = root.attr("schemaVersion") ? parse_int(root, "schemaVersion") : 1;
  doc.revision = root.attr("revision") ? parse_int(root, "revision") : 0;
  for (const auto& f : root.children) {
    if (f.name != "field") throw Error(Errc::syntax, "line " + std::to_string(f.line) + ": expected <field>");
    if (f.children.size() != 1)
      throw Error(Errc::syntax, "line " + std::to_string(f.line) + ": <field> needs exactly one value element");
    auto path = FieldPath::parse(need(f, "path"));
    if (!doc.values.emplace(path, value_from_element(f.children.front())).second)
      throw Error(Errc::syntax, "line " + std::to_string(f.line) + ": duplicate path " + path.str());
  }
  return doc;
}

EntityDocument entity_from_xml(std::string_view xml_text) { return entity_from_element(xml::parse(xml_text)); }

size_t DeleteReport::dangling_count() const {
  size_t n = 0;
  for (const auto& d : deleted) n += d.dangling.size();
  return n;
}

// ---------------------------------------------------------------------------
// Store

DocumentStore::DocumentStore(const schema::SchemaRegistry& schemas, access::AccessControl& access,
                             const vocab::TermResolver* terms, fs::path storage_root)
    : schemas_(schemas),
      access_(access),
      terms_(terms),
      data_dir_(std::move(storage_root)),
      clock_([] { return std::chrono::system_clock::now(); }) {}

DocumentStore::~DocumentStore() = default;

void DocumentStore::set_clock(Clock clock) { clock_ = std::move(clock); }

void DocumentStore::add_listener(Listener listener) {
  std::unique_lock lock(hooks_mutex_);
  listeners_.push_back(std::move(listener));
}

void DocumentStore::set_backlink_source(BacklinkSource source) {
  std::unique_lock lock(hooks_mutex_);
  backlinks_ = std::move(source);
}

void DocumentStore::set_normalize_options(chrono::NormalizeOptions options) { normalize_ = options; }

std::string DocumentStore::now_text() const { return access::format_utc(clock_()); }

void DocumentStore::notify(const Change& change) const {
  std::shared_lock lock(hooks_mutex_);
  for (const auto& l : listeners_) l(change);
}

std::shared_ptr<DocumentStore::Slot> DocumentStore::slot(std::string_view entity_id) const {
  std::shared_lock lock(map_mutex_);
  auto it = slots_.find(entity_id);
  return it == slots_.end() ? nullptr : it->second;
}

void DocumentStore::check(const access::User& actor, access::Action action, const access::Resource& resource) const {
  auto d = access_.authorize(actor, action, resource);
  if (d) return;
  const auto what = std::string(access::to_string(action)) + " denied for " + actor.user_id + ": " + d.reason;
  if (d.reason == "cross-org") throw Error(Errc::cross_org, what);
  if (d.reason == "insufficient-role") throw Error(Errc::insufficient_role, what);
  throw Error(Errc::permission_denied, what);
}

std::string DocumentStore::next_id(const EntityTypeSchema& schema) {
  long n = ++counters_[schema.id_prefix];
  std::string digits = std::to_string(n);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return schema.id_prefix + "-" + digits;
}

void DocumentStore::reserve_id(const std::string& id, const EntityTypeSchema& schema) {
  auto dash = id.rfind('-');
  if (dash == std::string::npos || id.substr(0, dash) != schema.id_prefix) return;
  long n = 0;
  auto tail = std::string_view(id).substr(dash + 1);
  auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
  if (ec == std::errc() && p == tail.data() + tail.size()) {
    auto& c = counters_[schema.id_prefix];
    c = std::max(c, n);
  }
}

fs::path DocumentStore::entity_file(const EntityDocument& doc) const {
  return data_dir_ / "data" / doc.org_id / doc.type_name / (doc.id + ".xml");
}

fs::path DocumentStore::version_dir(const EntityDocument& doc) const {
  return data_dir_ / "data" / doc.org_id / doc.type_name / doc.id;
}

void DocumentStore::persist(const EntityDocument& doc) const {
  if (data_dir_.empty()) return;
  auto schema = schemas_.latest(doc.type_name);
  fileio::write_file_atomic(entity_file(doc), entity_to_xml(doc, schema.get()));
}

void DocumentStore::persist_counters() const {
  if (data_dir_.empty()) return;
  std::string out;
  for (const auto& [prefix, n] : counters_) out += prefix + "\t" + std::to_string(n) + "\n";
  std::lock_guard lock(counter_file_mutex_);
  fileio::write_file_atomic(data_dir_ / "data" / "_counters.tsv", out);
}

void DocumentStore::persist_log(const StatusChange& c) const {
  if (data_dir_.empty()) return;
  std::lock_guard lock(counter_file_mutex_);
  fs::create_directories(data_dir_ / "data");
  std::ofstream out(data_dir_ / "data" / "_status-log.tsv", std::ios::app | std::ios::binary);
  out << c.entity_id << '\t' << to_string(c.from) << '\t' << to_string(c.to) << '\t' << c.actor << '\t' << c.at
      << '\n';
  if (!out) throw Error(Errc::io, "cannot append to status log");
}

void DocumentStore::record_revision(Slot& s, const EntityDocument& doc, const access::User& actor) const {
  RevisionRecord rec{doc.id, doc.revision, actor.user_id, now_text()};
  if (!data_dir_.empty()) {
    std::lock_guard lock(counter_file_mutex_);
    fs::create_directories(data_dir_ / "data");
    std::ofstream out(data_dir_ / "data" / "_revision-log.tsv", std::ios::app | std::ios::binary);
    out << rec.entity_id << '\t' << rec.revision << '\t' << rec.actor << '\t' << rec.at << '\n';
    if (!out) throw Error(Errc::io, "cannot append to revision log");
  }
  s.revisions.push_back(std::move(rec));
}

std::vector<RevisionRecord> DocumentStore::revision_log(const std::string& entity_id) const {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  return s->revisions;
}

void DocumentStore::load() {
  if (data_dir_.empty()) return;
  const auto data = data_dir_ / "data";
  std::map<std::string, std::shared_ptr<Slot>, std::less<>> slots;
  std::map<std::string, long, std::less<>> counters;

  if (fs::exists(data / "_counters.tsv")) {
    for (const auto& line : text::split(fileio::read_file(data / "_counters.tsv"), '\n')) {
      auto cols = text::split(line, '\t');
      if (cols.size() == 2) counters[cols[0]] = std::stol(cols[1]);
    }
  }

  if (fs::is_directory(data)) {
    for (const auto& org : fs::directory_iterator(data)) {
      if (!org.is_directory()) continue;
      for (const auto& type : fs::directory_iterator(org.path())) {
        if (!type.is_directory()) continue;
        for (const auto& file : fs::directory_iterator(type.path())) {
          if (!file.is_regular_file() || file.path().extension() != ".xml") continue;
          auto doc = std::make_shared<EntityDocument>(entity_from_xml(fileio::read_file(file.path())));
          auto s = std::make_shared<Slot>();
          auto vdir = type.path() / doc->id;
          if (fs::is_directory(vdir)) {
            for (const auto& vf : fs::directory_iterator(vdir)) {
              if (vf.path().extension() != ".xml") continue;
              auto root = xml::parse(fileio::read_file(vf.path()));
              VersionRecord rec;
              rec.version_number = parse_int(root, "number");
              rec.created_by = root.attr_or("created-by", "");
              rec.created_at = root.attr_or("created-at", "");
              if (root.children.size() != 1) throw Error(Errc::syntax, vf.path().string() + ": malformed version");
              rec.snapshot = entity_from_element(root.children.front());
              rec.xml = xml::write(root.children.front());
              s->versions.push_back(std::move(rec));
            }
            std::sort(s->versions.begin(), s->versions.end(),
                      [](const auto& a, const auto& b) { return a.version_number < b.version_number; });
          }
          if (auto schema = schemas_.latest(doc->type_name)) {
            auto& c = counters[schema->id_prefix];
            auto dash = doc->id.rfind('-');
            if (dash != std::string::npos) c = std::max(c, std::atol(doc->id.c_str() + dash + 1));
          }
          auto id = doc->id;
          s->doc = std::move(doc);
          slots.emplace(std::move(id), std::move(s));
        }
      }
    }
  }

  if (fs::exists(data / "_revision-log.tsv")) {
    for (const auto& line : text::split(fileio::read_file(data / "_revision-log.tsv"), '\n')) {
      auto cols = text::split(line, '\t');
      if (cols.size() != 4) continue;
      auto it = slots.find(cols[0]);
      if (it == slots.end()) continue;
      it->second->revisions.push_back({cols[0], std::atoi(cols[1].c_str()), cols[2], cols[3]});
    }
  }

  if (fs::exists(data / "_status-log.tsv")) {
    for (const auto& line : text::split(fileio::read_file(data / "_status-log.tsv"), '\n')) {
      auto cols = text::split(line, '\t');
      if (cols.size() != 5) continue;
      auto it = slots.find(cols[0]);
      if (it == slots.end()) continue;
      it->second->log.push_back({cols[0], status_from_string(cols[1]).value_or(Status::unpublished),
                                 status_from_string(cols[2]).value_or(Status::unpublished), cols[3], cols[4]});
    }
  }

  std::set<std::string> attachments;
  if (fs::is_directory(data_dir_ / "attachments"))
    for (const auto& f : fs::recursive_directory_iterator(data_dir_ / "attachments"))
      if (f.is_regular_file()) attachments.insert(f.path().filename().string());

  {
    std::unique_lock lock(map_mutex_);
    slots_ = std::move(slots);
    counters_ = std::move(counters);
  }
  {
    std::unique_lock lock(attachment_mutex_);
    attachment_ids_ = std::move(attachments);
  }
}

EntityDocument DocumentStore::create_entity(const std::string& type_name, const std::string& org_id,
                                            const access::User& actor) {
  auto schema = schemas_.latest(type_name);
  if (!schema) throw Error(Errc::unknown_type, "unknown entity type '" + type_name + "'");
  if (!access_.find_org(org_id)) throw Error(Errc::unknown_org, "unknown organisation '" + org_id + "'");
  check(actor, access::Action::create, access::Resource::organisation(org_id));

  auto doc = std::make_shared<EntityDocument>();
  doc->type_name = type_name;
  doc->schema_version = schema->version;
  doc->org_id = org_id;
  doc->creator_user_id = actor.user_id;
  auto s = std::make_shared<Slot>();
  std::lock_guard slot_lock(s->mutex);
  {
    std::unique_lock lock(map_mutex_);
    doc->id = next_id(*schema);
    s->doc = doc;
    slots_.emplace(doc->id, s);
    persist_counters();
  }
  persist(*doc);
  notify({Change::Kind::created, doc->id, nullptr, doc});
  return *doc;
}

void DocumentStore::apply_edits(EntityDocument& doc, const EntityTypeSchema& schema,
                                const std::vector<Edit>& edits) const {
  for (const auto& edit : edits) {
    auto path = canonical_path(schema, edit.path);
    if (!edit.value) {
      delete_instance(doc.values, path);
      continue;
    }
    auto node = schema::find_node(schema, path);
    if (node.field == nullptr) throw Error(Errc::schema_violation, "'" + path.str() + "' is a group, not a field");
    FieldValue v = *edit.value;
    if (auto* t = std::get_if<TimeVal>(&v)) {
      try {
        t->span = chrono::normalize(t->expr, normalize_);
      } catch (const Error& e) {
        throw Error(Errc::schema_violation, path.str() + ": " + e.what(), {std::string(to_string(e.code()))});
      }
    }
    if (const auto* l = std::get_if<EntityLink>(&v); l != nullptr && l->target_id != doc.id && !contains(l->target_id))
      throw Error(Errc::unresolvable_link, path.str() + ": no entity '" + l->target_id + "'");
    doc.values[path] = std::move(v);
  }
}

void DocumentStore::check_values(const EntityDocument& doc, const EntityTypeSchema& schema) const {
  ValidationContext ctx;
  ctx.terms = terms_;
  ctx.normalize = normalize_;
  auto issues = validate_document(doc, schema, ctx);
  std::vector<std::string> details;
  Errc code = Errc::schema_violation;
  for (const auto& i : issues) {
    if (i.severity != Severity::error) continue;
    details.push_back(to_string(i));
    if (i.code == "term-not-in-static-vocabulary") code = Errc::term_not_in_static_vocabulary;
  }
  if (!details.empty()) throw Error(code, details.front(), details);
}

int DocumentStore::apply_field_edits(const std::string& entity_id, const std::vector<Edit>& edits,
                                     int expected_revision, const access::User& actor) {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  if (!s->doc) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  const auto before = s->doc;
  check(actor, access::Action::edit, before->resource());
  if (before->revision != expected_revision)
    throw Error(Errc::revision_conflict, entity_id + " is at revision " + std::to_string(before->revision) +
                                             ", edit expected " + std::to_string(expected_revision));
  auto schema = schemas_.require(before->type_name);
  auto next = std::make_shared<EntityDocument>(*before);
  apply_edits(*next, *schema, edits);
  check_values(*next, *schema);
  next->schema_version = schema->version;
  next->revision += 1;
  persist(*next);
  record_revision(*s, *next, actor);
  s->doc = next;
  notify({Change::Kind::updated, entity_id, before, next});
  return next->revision;
}

bool DocumentStore::rewrite(const std::string& entity_id, const std::function<bool(EntityDocument&)>& fn,
                            const access::User& actor) {
  auto s = slot(entity_id);
  if (!s) return false;
  std::lock_guard lock(s->mutex);
  if (!s->doc) return false;
  const auto before = s->doc;
  auto next = std::make_shared<EntityDocument>(*before);
  if (!fn(*next)) return false;
  next->revision = before->revision + 1;
  persist(*next);
  record_revision(*s, *next, actor);
  s->doc = next;
  notify({Change::Kind::updated, entity_id, before, next});
  return true;
}

std::optional<EntityDocument> DocumentStore::find(std::string_view entity_id) const {
  auto s = slot(entity_id);
  if (!s) return std::nullopt;
  std::lock_guard lock(s->mutex);
  if (!s->doc) return std::nullopt;
  return *s->doc;
}

EntityDocument DocumentStore::get(std::string_view entity_id) const {
  auto d = find(entity_id);
  if (!d) throw Error(Errc::unknown_entity, "unknown entity '" + std::string(entity_id) + "'");
  return std::move(*d);
}

EntityDocument DocumentStore::view(std::string_view entity_id, const access::User& actor) const {
  auto d = get(entity_id);
  check(actor, access::Action::view, d.resource());
  return d;
}

bool DocumentStore::contains(std::string_view entity_id) const {
  std::shared_lock lock(map_mutex_);
  return slots_.count(entity_id) > 0;
}

std::vector<std::string> DocumentStore::ids() const {
  std::shared_lock lock(map_mutex_);
  std::vector<std::string> out;
  out.reserve(slots_.size());
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

size_t DocumentStore::size() const {
  std::shared_lock lock(map_mutex_);
  return slots_.size();
}

std::vector<std::shared_ptr<const EntityDocument>> DocumentStore::all() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(map_mutex_);
    slots.reserve(slots_.size());
    for (const auto& [id, s] : slots_) slots.push_back(s);
  }
  std::vector<std::shared_ptr<const EntityDocument>> out;
  out.reserve(slots.size());
  for (const auto& s : slots) {
    std::lock_guard lock(s->mutex);
    if (s->doc) out.push_back(s->doc);
  }
  return out;
}

std::vector<Issue> DocumentStore::validate(std::string_view entity_id) const {
  auto doc = get(entity_id);
  ValidationContext ctx;
  ctx.terms = terms_;
  ctx.normalize = normalize_;
  return validate_document(doc, *schemas_.require(doc.type_name), ctx);
}

int DocumentStore::snapshot_version(const std::string& entity_id, const access::User& actor) {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  if (!s->doc) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  check(actor, access::Action::edit, s->doc->resource());
  VersionRecord rec;
  rec.version_number = static_cast<int>(s->versions.size()) + 1;
  rec.snapshot = *s->doc;
  rec.created_by = actor.user_id;
  rec.created_at = now_text();
  auto schema = schemas_.latest(rec.snapshot.type_name);
  auto element = entity_to_element(rec.snapshot, schema.get());
  rec.xml = xml::write(element);
  if (!data_dir_.empty()) {
    xml::Element wrapper("version");
    wrapper.set("number", std::to_string(rec.version_number))
        .set("created-by", rec.created_by)
        .set("created-at", rec.created_at);
    wrapper.add(std::move(element));
    fileio::write_file_atomic(version_dir(rec.snapshot) / ("v" + std::to_string(rec.version_number) + ".xml"),
                              xml::write(wrapper));
  }
  s->versions.push_back(std::move(rec));
  return s->versions.back().version_number;
}

VersionRecord DocumentStore::get_version(const std::string& entity_id, int version_number) const {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  if (version_number < 1 || static_cast<size_t>(version_number) > s->versions.size())
    throw Error(Errc::unknown_version, entity_id + " has no version " + std::to_string(version_number));
  return s->versions[static_cast<size_t>(version_number - 1)];
}

std::vector<int> DocumentStore::list_versions(const std::string& entity_id) const {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  std::vector<int> out;
  for (const auto& v : s->versions) out.push_back(v.version_number);
  return out;
}

Status DocumentStore::transition_status(const std::string& entity_id, Status target, const access::User& actor) {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  if (!s->doc) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  const auto before = s->doc;
  const Status from = before->status;

  access::Action needed;
  if (from == Status::unpublished && target == Status::pending)
    needed = access::Action::request_publish;
  else if ((from == Status::pending && target == Status::published) ||
           (from == Status::pending && target == Status::unpublished) ||
           (from == Status::published && target == Status::unpublished))
    needed = access::Action::approve_publish;
  else
    throw Error(Errc::illegal_transition,
                std::string(to_string(from)) + " -> " + std::string(to_string(target)) + " is not a legal transition");
  check(actor, needed, before->resource());

  if (target == Status::pending) {
    ValidationContext ctx;
    ctx.terms = terms_;
    ctx.normalize = normalize_;
    ctx.require_complete = true;
    auto issues = validate_document(*before, *schemas_.require(before->type_name), ctx);
    std::vector<std::string> details;
    for (const auto& i : issues)
      if (i.severity == Severity::error) details.push_back(to_string(i));
    if (!details.empty())
      throw Error(Errc::validation_failed, entity_id + " is incomplete (" + std::to_string(details.size()) + " issues)",
                  details);
  }

  auto next = std::make_shared<EntityDocument>(*before);
  next->status = target;
  next->revision += 1;
  persist(*next);
  StatusChange change{entity_id, from, target, actor.user_id, now_text()};
  persist_log(change);
  record_revision(*s, *next, actor);
  s->log.push_back(change);
  s->doc = next;
  notify({Change::Kind::updated, entity_id, before, next});
  return target;
}

std::vector<StatusChange> DocumentStore::status_log(const std::string& entity_id) const {
  auto s = slot(entity_id);
  if (!s) throw Error(Errc::unknown_entity, "unknown entity '" + entity_id + "'");
  std::lock_guard lock(s->mutex);
  return s->log;
}

std::string DocumentStore::export_entity_xml(const std::string& entity_id, const access::User& actor) const {
  auto doc = view(entity_id, actor);
  auto schema = schemas_.latest(doc.type_name);
  return entity_to_xml(doc, schema.get());
}

ImportResult DocumentStore::import_entity_xml(std::string_view xml_text, const std::string& target_org,
                                              const access::User& actor, const ImportOptions& options) {
  EntityDocument incoming = entity_from_xml(xml_text);
  auto schema = schemas_.latest(incoming.type_name);
  if (!schema) throw Error(Errc::schema_mismatch, "entity type '" + incoming.type_name + "' is not registered");
  if (incoming.schema_version > schema->version)
    throw Error(Errc::schema_mismatch, incoming.type_name + " schema version " + std::to_string(incoming.schema_version) +
                                           " is newer than installed " + std::to_string(schema->version));
  if (!access_.find_org(target_org)) throw Error(Errc::unknown_org, "unknown organisation '" + target_org + "'");
  check(actor, access::Action::create, access::Resource::organisation(target_org));

  // Spans are recomputed with this installation's settings.
  for (auto& [path, value] : incoming.values) {
    if (auto* t = std::get_if<TimeVal>(&value)) {
      try {
        t->span = chrono::normalize(t->expr, normalize_);
      } catch (const Error& e) {
        throw Error(Errc::schema_mismatch, path.str() + ": " + e.what());
      }
    }
  }

  ValidationContext ctx;
  ctx.normalize = normalize_;
  auto issues = validate_document(incoming, *schema, ctx);
  std::vector<std::string> details;
  for (const auto& i : issues)
    if (i.severity == Severity::error) details.push_back(to_string(i));
  if (!details.empty()) throw Error(Errc::schema_mismatch, "document does not match " + schema->type_name, details);

  ImportResult result;
  const std::string source_id = incoming.id;
  for (const auto& [path, link] : outbound_links(incoming)) {
    const bool self = options.preserve_id && link.target_id == source_id;
    if (!self && !contains(link.target_id)) result.dangling.push_back({link.target_id, path});
  }
  if (!result.dangling.empty() && options.links == ImportOptions::Links::strict) {
    std::vector<std::string> what;
    for (const auto& d : result.dangling) what.push_back(d.path.str() + " -> " + d.referrer_id);
    throw Error(Errc::unresolvable_link, std::to_string(what.size()) + " link(s) point to absent entities", what);
  }

  auto doc = std::make_shared<EntityDocument>(std::move(incoming));
  doc->org_id = target_org;
  doc->schema_version = schema->version;
  doc->revision = 0;
  if (!options.keep_provenance) {
    doc->creator_user_id = actor.user_id;
    doc->status = Status::unpublished;
  }

  auto s = std::make_shared<Slot>();
  std::lock_guard slot_lock(s->mutex);
  {
    std::unique_lock lock(map_mutex_);
    if (options.preserve_id && !source_id.empty()) {
      if (slots_.count(source_id)) throw Error(Errc::collision, "entity '" + source_id + "' already exists");
      doc->id = source_id;
      reserve_id(source_id, *schema);
    } else {
      doc->id = next_id(*schema);
    }
    s->doc = doc;
    slots_.emplace(doc->id, s);
    persist_counters();
  }
  persist(*doc);
  notify({Change::Kind::created, doc->id, nullptr, doc});
  result.document = *doc;
  return result;
}

EntityDocument DocumentStore::copy_entity(const std::string& entity_id, const access::User& actor) {
  auto source = view(entity_id, actor);
  auto schema = schemas_.require(source.type_name);
  check(actor, access::Action::create, access::Resource::organisation(source.org_id));

  auto doc = std::make_shared<EntityDocument>();
  doc->type_name = source.type_name;
  doc->schema_version = schema->version;
  doc->org_id = source.org_id;
  doc->creator_user_id = actor.user_id;
  doc->values = source.values;

  auto s = std::make_shared<Slot>();
  std::lock_guard slot_lock(s->mutex);
  {
    std::unique_lock lock(map_mutex_);
    doc->id = next_id(*schema);
    s->doc = doc;
    slots_.emplace(doc->id, s);
    persist_counters();
  }
  persist(*doc);
  notify({Change::Kind::created, doc->id, nullptr, doc});
  return *doc;
}

std::vector<Backlink> DocumentStore::inbound(const std::string& entity_id) const {
  BacklinkSource source;
  {
    std::shared_lock lock(hooks_mutex_);
    source = backlinks_;
  }
  if (source) return source(entity_id);
  std::vector<Backlink> out;
  for (const auto& doc : all())
    for (const auto& [path, link] : outbound_links(*doc))
      if (link.target_id == entity_id) out.push_back({doc->id, path});
  std::sort(out.begin(), out.end());
  return out;
}

DeleteReport DocumentStore::delete_entities(const std::vector<std::string>& entity_ids, const access::User& actor) {
  DeleteReport report;
  std::vector<EntityDocument> doomed;
  for (const auto& id : entity_ids) {
    auto doc = find(id);
    if (!doc) {
      report.failures.push_back({id, std::string(to_string(Errc::unknown_entity)), "unknown entity '" + id + "'"});
      continue;
    }
    try {
      check(actor, access::Action::remove, doc->resource());
    } catch (const Error& e) {
      report.failures.push_back({id, std::string(to_string(e.code())), e.what()});
      continue;
    }
    doomed.push_back(std::move(*doc));
  }

  std::set<std::string> doomed_ids;
  for (const auto& d : doomed) doomed_ids.insert(d.id);

  const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(clock_().time_since_epoch()).count();
  for (const auto& d : doomed) {
    DeleteReport::Deleted entry{d.id, {}};
    for (auto& b : inbound(d.id))
      if (!doomed_ids.count(b.referrer_id)) entry.dangling.push_back(std::move(b));

    auto s = slot(d.id);
    if (!s) continue;
    std::shared_ptr<const EntityDocument> before;
    {
      std::lock_guard lock(s->mutex);
      before = s->doc;
      s->doc.reset();
      {
        std::unique_lock map_lock(map_mutex_);
        slots_.erase(d.id);
      }
      if (!data_dir_.empty() && before) {
        auto trash = data_dir_ / "trash" / (std::to_string(stamp) + "-" + d.id);
        fs::create_directories(trash);
        std::error_code ec;
        fs::rename(entity_file(*before), trash / (d.id + ".xml"), ec);
        if (fs::is_directory(version_dir(*before))) fs::rename(version_dir(*before), trash / "versions", ec);
      }
    }
    access_.drop_grants(d.id);
    if (before) notify({Change::Kind::deleted, d.id, before, nullptr});
    report.deleted.push_back(std::move(entry));
  }
  return report;
}

std::string DocumentStore::put_attachment(std::string_view bytes) {
  auto id = text::sha256_hex(bytes);
  std::unique_lock lock(attachment_mutex_);
  if (attachment_ids_.count(id)) return id;
  if (data_dir_.empty())
    memory_attachments_.emplace(id, std::string(bytes));
  else
    fileio::write_file_atomic(data_dir_ / "attachments" / id.substr(0, 2) / id, bytes);
  attachment_ids_.insert(id);
  return id;
}

std::optional<std::string> DocumentStore::get_attachment(const std::string& attachment_id) const {
  std::shared_lock lock(attachment_mutex_);
  if (!attachment_ids_.count(attachment_id)) return std::nullopt;
  if (data_dir_.empty()) return memory_attachments_.at(attachment_id);
  return fileio::read_file(data_dir_ / "attachments" / attachment_id.substr(0, 2) / attachment_id);
}

size_t DocumentStore::attachment_count() const {
  std::shared_lock lock(attachment_mutex_);
  return attachment_ids_.size();
}

size_t DocumentStore::purge_trash(std::chrono::hours max_age) {
  if (data_dir_.empty() || !fs::is_directory(data_dir_ / "trash")) return 0;
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(clock_().time_since_epoch()).count();
  const auto limit = std::chrono::duration_cast<std::chrono::seconds>(max_age).count();
  size_t removed = 0;
  for (const auto& entry : fs::directory_iterator(data_dir_ / "trash")) {
    const auto name = entry.path().filename().string();
    auto dash = name.find('-');
    if (dash == std::string::npos) continue;
    long long stamp = 0;
    auto [p, ec] = std::from_chars(name.data(), name.data() + dash, stamp);
    if (ec != std::errc()) continue;
    if (now - stamp > limit) {
      fs::remove_all(entry.path());
      ++removed;
    }
  }
  return removed;
}

}  // namespace scriptorium::docs
