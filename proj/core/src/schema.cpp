#include "scriptorium/schema.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

#include "scriptorium/text.hpp"
#include "scriptorium/xml.hpp"

namespace scriptorium::schema {

namespace {

constexpr std::pair<Kind, std::string_view> kind_names[] = {
    {Kind::entity_link, "entity-link"},
    {Kind::vocab_term, "vocab-term"},
    {Kind::thesaurus_term, "thesaurus-term"},
    {Kind::text_plain, "text-plain"},
    {Kind::text_formatted, "text-formatted"},
    {Kind::number, "number"},
    {Kind::time_expression, "time-expression"},
    {Kind::geo_coordinates, "geo-coordinates"},
    {Kind::geo_external_id, "geo-external-id"},
    {Kind::digital_file, "digital-file"},
};

bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string at_line(const xml::Element& e) { return e.line > 0 ? "line " + std::to_string(e.line) + ": " : ""; }

bool parse_bool(const xml::Element& e, std::string_view key) {
  auto v = e.attr(key);
  if (!v || *v == "false") return false;
  if (*v == "true") return true;
  throw Error(Errc::syntax, at_line(e) + "attribute '" + std::string(key) + "' must be true or false");
}

std::vector<std::string> parse_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto& part : text::split(s, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

Labels parse_labels(const xml::Element& e, const std::string& default_lang) {
  Labels labels;
  if (auto l = e.attr("label")) labels[default_lang] = std::string(*l);
  for (const auto* child : e.all("label")) labels[child->attr_or("lang", default_lang)] = child->text;
  return labels;
}

void check_siblings(const std::vector<Node>& children, const std::string& where) {
  std::set<std::string_view> seen;
  for (const auto& c : children) {
    const auto& n = node_name(c);
    if (!seen.insert(n).second)
      throw Error(Errc::duplicate_name, "duplicate sibling name '" + n + "' under " + where);
  }
}

bool has_leaf(const GroupDef& g) {
  for (const auto& c : g.children) {
    if (std::holds_alternative<FieldDef>(c)) return true;
    if (has_leaf(std::get<GroupDef>(c))) return true;
  }
  return false;
}

void check_field(const FieldDef& f, const std::string& where) {
  if (!valid_identifier(f.name)) throw Error(Errc::syntax, where + "invalid field name '" + f.name + "'");
  switch (f.kind.kind) {
    case Kind::entity_link:
      if (f.kind.targets.empty())
        throw Error(Errc::syntax, where + "entity-link field '" + f.name + "' needs at least one target type");
      break;
    case Kind::vocab_term:
      if (f.kind.vocab.empty())
        throw Error(Errc::syntax, where + "vocab-term field '" + f.name + "' needs a vocab attribute");
      break;
    case Kind::thesaurus_term:
      if (f.kind.thesaurus.empty())
        throw Error(Errc::syntax, where + "thesaurus-term field '" + f.name + "' needs a thesaurus attribute");
      break;
    default: break;
  }
}

void check_group(const GroupDef& g, const std::string& where) {
  if (!valid_identifier(g.name)) throw Error(Errc::syntax, where + "invalid group name '" + g.name + "'");
  if (!has_leaf(g)) throw Error(Errc::syntax, where + "group '" + g.name + "' has no fields");
  check_siblings(g.children, "'" + g.name + "'");
  for (const auto& c : g.children) {
    if (const auto* f = std::get_if<FieldDef>(&c))
      check_field(*f, where);
    else
      check_group(std::get<GroupDef>(c), where);
  }
}

Node parse_node(const xml::Element& e, const std::string& lang);

GroupDef parse_group(const xml::Element& e, const std::string& lang) {
  GroupDef g;
  g.name = e.attr_or("name", "");
  g.label = parse_labels(e, lang);
  g.multiple = parse_bool(e, "multiple");
  for (const auto& c : e.children) {
    if (c.name == "group" || c.name == "field") g.children.push_back(parse_node(c, lang));
    else if (c.name != "label")
      throw Error(Errc::syntax, at_line(c) + "unexpected element <" + c.name + "> in group");
  }
  if (!valid_identifier(g.name)) throw Error(Errc::syntax, at_line(e) + "invalid group name '" + g.name + "'");
  check_siblings(g.children, "'" + g.name + "'");
  if (!has_leaf(g)) throw Error(Errc::syntax, at_line(e) + "group '" + g.name + "' has no fields");
  return g;
}

FieldDef parse_field(const xml::Element& e, const std::string& lang) {
  FieldDef f;
  f.name = e.attr_or("name", "");
  f.label = parse_labels(e, lang);
  f.multiple = parse_bool(e, "multiple");
  f.required = parse_bool(e, "required");
  auto kind_name = e.attr_or("kind", "");
  auto kind = kind_from_string(kind_name);
  if (!kind) throw Error(Errc::unknown_field_kind, at_line(e) + "unknown field kind '" + kind_name + "'");
  f.kind.kind = *kind;
  f.kind.vocab = e.attr_or("vocab", "");
  auto mode = e.attr_or("mode", "dynamic");
  if (mode == "static")
    f.kind.mode = VocabMode::static_;
  else if (mode == "dynamic")
    f.kind.mode = VocabMode::dynamic;
  else
    throw Error(Errc::syntax, at_line(e) + "mode must be static or dynamic");
  f.kind.thesaurus = e.attr_or("thesaurus", "");
  f.kind.targets = parse_list(e.attr_or("targets", ""));
  f.kind.media = parse_list(e.attr_or("media", ""));
  check_field(f, at_line(e));
  return f;
}

Node parse_node(const xml::Element& e, const std::string& lang) {
  if (e.name == "group") return parse_group(e, lang);
  return parse_field(e, lang);
}

void write_labels(xml::Element& e, const Labels& labels, const std::string& default_lang) {
  if (auto it = labels.find(default_lang); it != labels.end()) e.set("label", it->second);
  for (const auto& [lang, text] : labels) {
    if (lang == default_lang) continue;
    e.add_text("label", text).set("lang", lang);
  }
}

// <label> children precede structural children.
xml::Element write_node(const Node& n, const std::string& lang) {
  if (const auto* f = std::get_if<FieldDef>(&n)) {
    xml::Element e("field");
    e.set("name", f->name);
    e.set("kind", std::string(to_string(f->kind.kind)));
    e.set("multiple", f->multiple ? "true" : "false");
    e.set("required", f->required ? "true" : "false");
    if (!f->kind.vocab.empty()) {
      e.set("vocab", f->kind.vocab);
      e.set("mode", std::string(to_string(f->kind.mode)));
    }
    if (!f->kind.targets.empty()) e.set("targets", text::join(f->kind.targets, ","));
    if (!f->kind.thesaurus.empty()) e.set("thesaurus", f->kind.thesaurus);
    if (!f->kind.media.empty()) e.set("media", text::join(f->kind.media, ","));
    write_labels(e, f->label, lang);
    return e;
  }
  const auto& g = std::get<GroupDef>(n);
  xml::Element e("group");
  e.set("name", g.name);
  e.set("multiple", g.multiple ? "true" : "false");
  write_labels(e, g.label, lang);
  for (const auto& c : g.children) e.add(write_node(c, lang));
  return e;
}

const Node* find_child(const GroupDef& g, std::string_view name) {
  for (const auto& c : g.children)
    if (node_name(c) == name) return &c;
  return nullptr;
}

int child_position(const GroupDef& g, std::string_view name) {
  for (size_t i = 0; i < g.children.size(); ++i)
    if (node_name(g.children[i]) == name) return static_cast<int>(i);
  return -1;
}

void collect_leaves(const GroupDef& g, const FieldPath& prefix, std::vector<LeafRef>& out) {
  for (const auto& c : g.children) {
    if (const auto* f = std::get_if<FieldDef>(&c))
      out.push_back({prefix.child(f->name), f});
    else {
      const auto& sub = std::get<GroupDef>(c);
      collect_leaves(sub, prefix.child(sub.name), out);
    }
  }
}

size_t group_depth(const GroupDef& g) {
  size_t d = 0;
  for (const auto& c : g.children) {
    if (std::holds_alternative<FieldDef>(c))
      d = std::max<size_t>(d, 1);
    else
      d = std::max(d, 1 + group_depth(std::get<GroupDef>(c)));
  }
  return d;
}

// True when a required leaf is reachable through singular groups only, i.e.
// documents that never mention this node would fail the required check.
bool required_reachable(const Node& n) {
  if (const auto* f = std::get_if<FieldDef>(&n)) return f->required;
  const auto& g = std::get<GroupDef>(n);
  if (g.multiple) return false;
  return std::any_of(g.children.begin(), g.children.end(), required_reachable);
}

}  // namespace

std::string_view to_string(Kind k) {
  for (const auto& [kind, name] : kind_names)
    if (kind == k) return name;
  return "";
}

std::optional<Kind> kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kind_names)
    if (name == s) return kind;
  return std::nullopt;
}

std::string_view to_string(VocabMode m) { return m == VocabMode::static_ ? "static" : "dynamic"; }

bool GroupDef::operator==(const GroupDef& o) const {
  return name == o.name && label == o.label && multiple == o.multiple && children == o.children;
}

const std::string& node_name(const Node& n) {
  return std::visit([](const auto& v) -> const std::string& { return v.name; }, n);
}

bool node_multiple(const Node& n) {
  return std::visit([](const auto& v) { return v.multiple; }, n);
}

FieldPath FieldPath::parse(std::string_view s) {
  auto bad = [&](const std::string& why) {
    return Error(Errc::malformed_path, "malformed field path '" + std::string(s) + "': " + why);
  };
  if (s.empty()) throw bad("empty");
  std::vector<PathSegment> segs;
  for (const auto& raw : text::split(s, '/')) {
    PathSegment seg;
    std::string_view part = raw;
    if (auto lb = part.find('['); lb != std::string_view::npos) {
      if (part.back() != ']') throw bad("unterminated index");
      auto digits = part.substr(lb + 1, part.size() - lb - 2);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw bad("index must be a positive integer");
      if (digits.size() > 6) throw bad("index too large");
      int idx = std::stoi(std::string(digits));
      if (idx < 1) throw bad("indices start at 1");
      seg.index = idx;
      part = part.substr(0, lb);
    }
    if (!valid_identifier(part)) throw bad("invalid segment '" + std::string(part) + "'");
    seg.name = std::string(part);
    segs.push_back(std::move(seg));
  }
  return FieldPath(std::move(segs));
}

std::string FieldPath::str() const {
  std::string out;
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += '/';
    out += segments_[i].name;
    if (segments_[i].index) out += "[" + std::to_string(*segments_[i].index) + "]";
  }
  return out;
}

FieldPath FieldPath::without_indices() const {
  auto copy = segments_;
  for (auto& s : copy) s.index.reset();
  return FieldPath(std::move(copy));
}

FieldPath FieldPath::prefix(size_t n) const {
  return FieldPath(std::vector<PathSegment>(segments_.begin(), segments_.begin() + static_cast<std::ptrdiff_t>(std::min(n, segments_.size()))));
}

FieldPath FieldPath::child(std::string name, std::optional<int> index) const {
  auto copy = segments_;
  copy.push_back({std::move(name), index});
  return FieldPath(std::move(copy));
}

FieldPath FieldPath::concat(const FieldPath& tail) const {
  auto copy = segments_;
  copy.insert(copy.end(), tail.segments_.begin(), tail.segments_.end());
  return FieldPath(std::move(copy));
}

bool FieldPath::starts_with(const FieldPath& other) const {
  if (other.size() > size()) return false;
  return std::equal(other.segments_.begin(), other.segments_.end(), segments_.begin());
}

bool FieldPath::same_template(const FieldPath& other) const {
  if (other.size() != size()) return false;
  for (size_t i = 0; i < size(); ++i)
    if (segments_[i].name != other.segments_[i].name) return false;
  return true;
}

EntityTypeSchema parse_schema(std::string_view xml_text) {
  auto root = xml::parse(xml_text);
  if (root.name != "schema") throw Error(Errc::syntax, at_line(root) + "root element must be <schema>");
  EntityTypeSchema s;
  s.type_name = root.attr_or("type", "");
  if (!valid_identifier(s.type_name)) throw Error(Errc::syntax, "schema type must be an identifier");
  auto version = root.attr_or("version", "1");
  try {
    s.version = std::stoi(version);
  } catch (const std::exception&) {
    throw Error(Errc::syntax, "schema version must be a positive integer");
  }
  if (s.version < 1) throw Error(Errc::syntax, "schema version must be a positive integer");
  s.default_language = root.attr_or("lang", "en");
  s.id_prefix = root.attr_or("prefix", text::casefold(s.type_name.substr(0, 3)));
  s.label = parse_labels(root, s.default_language);
  s.root.name = s.type_name;
  for (const auto& c : root.children) {
    if (c.name == "group" || c.name == "field") {
      s.root.children.push_back(parse_node(c, s.default_language));
    } else if (c.name == "summary") {
      for (const auto* col : c.all("col")) s.summary_columns.push_back(FieldPath::parse(col->attr_or("path", "")));
    } else if (c.name == "map") {
      for (const auto* p : c.all("point")) s.map.point_fields.push_back(FieldPath::parse(p->attr_or("path", "")));
      for (const auto* p : c.all("popup")) s.map.popup_fields.push_back(FieldPath::parse(p->attr_or("path", "")));
    } else if (c.name != "label") {
      throw Error(Errc::syntax, at_line(c) + "unexpected element <" + c.name + ">");
    }
  }
  check_siblings(s.root.children, "schema root");
  if (!has_leaf(s.root)) throw Error(Errc::syntax, "schema '" + s.type_name + "' has no fields");
  return s;
}

std::string serialize_schema(const EntityTypeSchema& s) {
  xml::Element root("schema");
  root.set("type", s.type_name);
  root.set("version", std::to_string(s.version));
  root.set("prefix", s.id_prefix);
  root.set("lang", s.default_language);
  write_labels(root, s.label, s.default_language);
  for (const auto& c : s.root.children) root.add(write_node(c, s.default_language));
  if (!s.summary_columns.empty()) {
    auto& summary = root.add(xml::Element("summary"));
    for (const auto& p : s.summary_columns) summary.add(xml::Element("col")).set("path", p.str());
  }
  if (!s.map.point_fields.empty() || !s.map.popup_fields.empty()) {
    auto& map = root.add(xml::Element("map"));
    for (const auto& p : s.map.point_fields) map.add(xml::Element("point")).set("path", p.str());
    for (const auto& p : s.map.popup_fields) map.add(xml::Element("popup")).set("path", p.str());
  }
  return xml::write(root);
}

ResolvedNode find_node(const EntityTypeSchema& schema, const FieldPath& path) noexcept {
  const GroupDef* group = &schema.root;
  ResolvedNode result{&schema.root, nullptr};
  for (size_t i = 0; i < path.size(); ++i) {
    if (group == nullptr) return {};
    const auto& seg = path.segments()[i];
    const Node* n = find_child(*group, seg.name);
    if (n == nullptr) return {};
    if (seg.index && !node_multiple(*n)) return {};
    if (const auto* f = std::get_if<FieldDef>(n)) {
      result = {nullptr, f};
      group = nullptr;
    } else {
      group = &std::get<GroupDef>(*n);
      result = {group, nullptr};
    }
  }
  return result;
}

ResolvedNode resolve_field_path(const EntityTypeSchema& schema, const FieldPath& path) {
  const GroupDef* group = &schema.root;
  ResolvedNode result{&schema.root, nullptr};
  for (size_t i = 0; i < path.size(); ++i) {
    const auto& seg = path.segments()[i];
    const Node* n = group ? find_child(*group, seg.name) : nullptr;
    if (n == nullptr)
      throw Error(Errc::no_such_segment, "'" + seg.name + "' does not exist at " + path.prefix(i).str() +
                                             " in schema " + schema.type_name);
    if (seg.index && !node_multiple(*n))
      throw Error(Errc::index_on_singular_segment, "'" + seg.name + "' is not multiple; index not allowed in " + path.str());
    if (const auto* f = std::get_if<FieldDef>(n)) {
      result = {nullptr, f};
      group = nullptr;
    } else {
      group = &std::get<GroupDef>(*n);
      result = {group, nullptr};
    }
  }
  return result;
}

std::vector<LeafRef> leaves(const EntityTypeSchema& schema) {
  std::vector<LeafRef> out;
  collect_leaves(schema.root, FieldPath{}, out);
  return out;
}

size_t depth(const EntityTypeSchema& schema) { return group_depth(schema.root); }

std::vector<std::pair<int, int>> schema_order_key(const EntityTypeSchema& schema, const FieldPath& path) {
  std::vector<std::pair<int, int>> key;
  const GroupDef* group = &schema.root;
  for (const auto& seg : path.segments()) {
    int pos = group ? child_position(*group, seg.name) : -1;
    key.emplace_back(pos, seg.index.value_or(0));
    if (group && pos >= 0) {
      const auto& n = group->children[static_cast<size_t>(pos)];
      group = std::get_if<GroupDef>(&n);
    } else {
      group = nullptr;
    }
  }
  return key;
}

std::vector<Issue> validate_schema(const EntityTypeSchema& schema, const Catalog& catalog) {
  std::vector<Issue> issues;
  for (const auto& leaf : leaves(schema)) {
    const auto& k = leaf.def->kind;
    auto path = leaf.path.str();
    switch (k.kind) {
      case Kind::entity_link:
        for (const auto& t : k.targets)
          if (!catalog.entity_types.count(t))
            issues.push_back({Severity::error, "unresolved-target-type", path, "entity type '" + t + "' is not registered"});
        break;
      case Kind::vocab_term: {
        auto it = catalog.vocabularies.find(k.vocab);
        if (it == catalog.vocabularies.end())
          issues.push_back({Severity::error, "unresolved-vocabulary", path, "vocabulary '" + k.vocab + "' is not registered"});
        else if (it->second != k.mode)
          issues.push_back({Severity::error, "vocabulary-mode-mismatch", path,
                            "field declares " + std::string(to_string(k.mode)) + " but vocabulary '" + k.vocab + "' is " +
                                std::string(to_string(it->second))});
        break;
      }
      case Kind::thesaurus_term:
        if (!catalog.thesauri.count(k.thesaurus))
          issues.push_back({Severity::error, "unresolved-thesaurus", path, "thesaurus '" + k.thesaurus + "' is not registered"});
        break;
      default: break;
    }
  }
  for (const auto& col : schema.summary_columns) {
    if (find_node(schema, col).field == nullptr)
      issues.push_back({Severity::error, "dangling-summary-column", col.str(), "summary column does not resolve to a field"});
  }
  for (const auto* list : {&schema.map.point_fields, &schema.map.popup_fields}) {
    for (const auto& p : *list)
      if (find_node(schema, p).field == nullptr)
        issues.push_back({Severity::error, "dangling-map-field", p.str(), "map field does not resolve to a field"});
  }
  return issues;
}

EntityTypeSchema extend_schema(const EntityTypeSchema& schema, const std::vector<Addition>& additions) {
  EntityTypeSchema next = schema;
  for (const auto& add : additions) {
    auto parent_path = add.parent.without_indices();
    ResolvedNode where{&next.root, nullptr};
    if (!parent_path.empty()) {
      where = find_node(next, parent_path);
      if (where.group == nullptr)
        throw Error(Errc::parent_not_found, "parent group '" + parent_path.str() + "' not found");
    }
    auto* parent = const_cast<GroupDef*>(where.group);
    const auto& name = node_name(add.node);
    if (find_child(*parent, name) != nullptr)
      throw Error(Errc::collision, "'" + name + "' already exists under '" + parent_path.str() + "'");
    if (const auto* g = std::get_if<GroupDef>(&add.node))
      check_group(*g, "");
    else
      check_field(std::get<FieldDef>(add.node), "");
    if (required_reachable(add.node))
      throw Error(Errc::non_additive_change,
                  "adding required field(s) under '" + name + "' would invalidate existing documents");
    parent->children.push_back(add.node);
  }
  next.version = schema.version + 1;
  return next;
}

size_t count_fields_of_kind(const EntityTypeSchema& schema, Kind kind) {
  size_t n = 0;
  for (const auto& l : leaves(schema))
    if (l.def->kind.kind == kind) ++n;
  return n;
}

size_t count_link_fields(const std::vector<const EntityTypeSchema*>& schemas) {
  size_t n = 0;
  for (const auto* s : schemas) n += count_fields_of_kind(*s, Kind::entity_link);
  return n;
}

void SchemaRegistry::publish(EntityTypeSchema schema) {
  std::unique_lock lock(mutex_);
  auto& revs = revisions_[schema.type_name];
  if (!revs.empty() && revs.back()->version >= schema.version)
    throw Error(Errc::schema_violation, "schema version for '" + schema.type_name + "' must increase (have " +
                                            std::to_string(revs.back()->version) + ", got " +
                                            std::to_string(schema.version) + ")");
  revs.push_back(std::make_shared<const EntityTypeSchema>(std::move(schema)));
}

SchemaRegistry::Ptr SchemaRegistry::latest(std::string_view type_name) const {
  std::shared_lock lock(mutex_);
  auto it = revisions_.find(type_name);
  if (it == revisions_.end() || it->second.empty()) return nullptr;
  return it->second.back();
}

SchemaRegistry::Ptr SchemaRegistry::at(std::string_view type_name, int version) const {
  std::shared_lock lock(mutex_);
  auto it = revisions_.find(type_name);
  if (it == revisions_.end()) return nullptr;
  for (const auto& p : it->second)
    if (p->version == version) return p;
  return nullptr;
}

SchemaRegistry::Ptr SchemaRegistry::require(std::string_view type_name) const {
  auto p = latest(type_name);
  if (!p) throw Error(Errc::unknown_type, "unknown entity type '" + std::string(type_name) + "'");
  return p;
}

bool SchemaRegistry::contains(std::string_view type_name) const { return latest(type_name) != nullptr; }

std::vector<std::string> SchemaRegistry::type_names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, revs] : revisions_) out.push_back(name);
  return out;
}

std::vector<SchemaRegistry::Ptr> SchemaRegistry::all_latest() const {
  std::shared_lock lock(mutex_);
  std::vector<Ptr> out;
  for (const auto& [name, revs] : revisions_)
    if (!revs.empty()) out.push_back(revs.back());
  return out;
}

std::string SchemaRegistry::type_for_prefix(std::string_view prefix) const {
  std::shared_lock lock(mutex_);
  for (const auto& [name, revs] : revisions_)
    if (!revs.empty() && revs.back()->id_prefix == prefix) return name;
  return {};
}

}  // namespace scriptorium::schema
