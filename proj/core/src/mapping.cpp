#include "scriptorium/mapping.hpp"

#include <algorithm>

#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"
#include "scriptorium/xml.hpp"

namespace scriptorium::mapping {

namespace {

std::string strip_base(std::string_view base) {
  while (!base.empty() && base.back() == '/') base.remove_suffix(1);
  return std::string(base);
}

bool is_quoted(std::string_view c) {
  return c.size() >= 2 && (c.front() == '\'' || c.front() == '"') && c.back() == c.front();
}

constexpr std::string_view kComponentNames[] = {"type", "id", "path", "parent", "class", "property"};

FieldPath parse_template(std::string_view text, std::string_view what) {
  auto p = FieldPath::parse(text);
  for (const auto& seg : p.segments())
    if (seg.index) throw Error(Errc::malformed_path, std::string(what) + " '" + std::string(text) + "' must not carry indices");
  return p;
}

std::string expand(std::string_view curie_or_iri, const rdf::Prefixes& prefixes) {
  if (curie_or_iri.find("://") != std::string_view::npos) return std::string(curie_or_iri);
  return rdf::expand_curie(curie_or_iri, prefixes);
}

}  // namespace

UriPolicy parse_uri_policy(std::string_view expr_in, const rdf::Prefixes& prefixes) {
  const auto expr = text::trim(expr_in);
  auto open = expr.find('(');
  if (open == std::string::npos || expr.back() != ')') {
    if (expr.find("://") != std::string::npos) return Fixed{expr};
    throw Error(Errc::syntax, "bad uri policy '" + expr + "'");
  }
  const auto fn = expr.substr(0, open);
  const auto inner = expr.substr(open + 1, expr.size() - open - 2);
  std::vector<std::string> args;
  for (const auto& a : text::split(inner, ',')) args.push_back(text::trim(a));

  if (fn == "hash") {
    if (args.empty() || (args.size() == 1 && args[0].empty())) throw Error(Errc::syntax, "hash() needs components");
    for (const auto& a : args)
      if (!is_quoted(a) && std::find(std::begin(kComponentNames), std::end(kComponentNames), a) == std::end(kComponentNames))
        throw Error(Errc::syntax, "unknown hash component '" + a + "'");
    return HashOf{args};
  }
  if (fn == "slug") {
    if (args.size() != 2 || args[0].empty()) throw Error(Errc::syntax, "slug() takes (prefix, field)");
    return LabelSlug{parse_template(args[1], "slug field"), args[0]};
  }
  if (fn == "fixed") {
    if (args.size() != 1 || args[0].empty()) throw Error(Errc::syntax, "fixed() takes one IRI");
    return Fixed{expand(args[0], prefixes)};
  }
  throw Error(Errc::syntax, "unknown uri policy '" + fn + "'");
}

std::string to_string(const UriPolicy& policy) {
  if (const auto* h = std::get_if<HashOf>(&policy)) return "hash(" + text::join(h->components, ",") + ")";
  if (const auto* s = std::get_if<LabelSlug>(&policy)) return "slug(" + s->prefix + "," + s->field.str() + ")";
  return "fixed(" + std::get<Fixed>(policy).iri + ")";
}

std::string generate_uri(const UriPolicy& policy, const UriInputs& in, std::string_view base_iri) {
  const auto base = strip_base(base_iri);
  if (const auto* h = std::get_if<HashOf>(&policy)) {
    std::vector<std::string> parts;
    for (const auto& c : h->components) {
      std::string v;
      if (is_quoted(c)) v = c.substr(1, c.size() - 2);
      else if (c == "type") v = in.type;
      else if (c == "id") v = in.id;
      else if (c == "path") v = in.path;
      else if (c == "parent") {
        if (auto slash = in.path.rfind('/'); slash != std::string::npos) v = in.path.substr(0, slash);
      }
      else if (c == "class") v = in.class_iri;
      else if (c == "property") v = in.property;
      if (v.empty()) throw Error(Errc::missing_input, "uri component '" + c + "' is empty");
      parts.push_back(std::move(v));
    }
    return base + "/res/" + text::sha256_hex(text::join(parts, "|")).substr(0, 16);
  }
  if (const auto* s = std::get_if<LabelSlug>(&policy)) {
    auto slug = text::slugify(in.label);
    if (slug.empty()) throw Error(Errc::missing_input, "no label for slug from " + s->field.str());
    return base + "/" + s->prefix + "/" + slug;
  }
  return std::get<Fixed>(policy).iri;
}

std::string entity_iri(std::string_view base_iri, std::string_view type_name, std::string_view entity_id) {
  UriInputs in;
  in.type = type_name;
  in.id = entity_id;
  return generate_uri(HashOf{{"type", "id"}}, in, base_iri);
}

std::string_view to_string(TerminalKind k) {
  switch (k) {
    case TerminalKind::entity_ref: return "entity-ref";
    case TerminalKind::term_ref: return "term-ref";
    case TerminalKind::literal: return "literal";
    case TerminalKind::timespan: return "timespan";
    case TerminalKind::coordinates: return "coordinates";
  }
  return "literal";
}

static TerminalKind terminal_kind(std::string_view s) {
  for (auto k : {TerminalKind::entity_ref, TerminalKind::term_ref, TerminalKind::literal, TerminalKind::timespan,
                 TerminalKind::coordinates})
    if (to_string(k) == s) return k;
  throw Error(Errc::syntax, "unknown terminal kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Parsing

MappingSpec parse_mapping(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  if (root.name != "mappings") throw Error(Errc::syntax, "root element must be <mappings>");
  MappingSpec spec;
  spec.ontology = root.attr_or("ontology", "");
  for (const auto* p : root.all("prefix")) {
    auto name = p->attr_or("name", "");
    auto iri = p->attr_or("iri", "");
    if (name.empty() || iri.empty()) throw Error(Errc::syntax, "line " + std::to_string(p->line) + ": prefix needs name and iri");
    spec.prefixes[name] = iri;
  }

  auto mappings = root.all("mapping");
  if (mappings.empty()) throw Error(Errc::missing_domain, "no <mapping> element");
  if (mappings.size() > 1) throw Error(Errc::syntax, "one <mapping> per file");
  const auto& m = *mappings.front();
  auto domains = m.all("domain");
  if (domains.empty()) throw Error(Errc::missing_domain, "mapping has no <domain>");
  if (domains.size() > 1) throw Error(Errc::syntax, "exactly one <domain> per mapping");
  const auto& d = *domains.front();
  spec.domain.source_type = d.attr_or("source", "");
  if (spec.domain.source_type.empty()) throw Error(Errc::missing_domain, "domain without source type");
  spec.domain.class_iri = expand(d.attr_or("class", ""), spec.prefixes);
  spec.domain.uri = parse_uri_policy(d.attr_or("uri", "hash(type,id)"), spec.prefixes);

  int group = 0;
  for (const auto* link : m.all("link")) {
    auto source = parse_template(link->attr_or("source", ""), "link source");
    std::vector<Step> chain;
    for (const auto* s : link->all("step")) {
      auto cls = expand(s->attr_or("class", ""), spec.prefixes);
      chain.push_back(Step{expand(s->attr_or("property", ""), spec.prefixes), cls,
                           parse_uri_policy(s->attr_or("uri", "hash(type,id,path,class)"), spec.prefixes)});
    }
    auto terminals = link->all("terminal");
    if (terminals.empty())
      throw Error(Errc::syntax, "line " + std::to_string(link->line) + ": link without <terminal>");
    for (const auto* t : terminals) {
      Terminal term;
      term.kind = terminal_kind(t->attr_or("kind", "literal"));
      if (auto src = t->attr_or("source", ""); !src.empty()) term.source = parse_template(src, "terminal source");
      term.property = expand(t->attr_or("property", ""), spec.prefixes);
      if (auto dt = t->attr_or("datatype", ""); !dt.empty()) term.datatype = expand(dt, spec.prefixes);
      term.language = t->attr_or("lang", "");
      term.target_type = t->attr_or("target", "");
      spec.links.push_back(LinkRule{source, chain, std::move(term), group});
    }
    ++group;
  }
  return spec;
}

MappingSpec load_mapping(const std::filesystem::path& file) { return parse_mapping(fileio::read_file(file)); }

std::map<std::string, MappingSpec> load_mapping_dir(const std::filesystem::path& dir) {
  std::map<std::string, MappingSpec> out;
  if (!std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".xml") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto spec = load_mapping(f);
    auto type = spec.domain.source_type;
    if (!out.emplace(type, std::move(spec)).second)
      throw Error(Errc::duplicate_name, "two mapping files for " + type);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ontology terms

OntologyTerms parse_ontology_terms(std::string_view turtle) {
  OntologyTerms terms;
  const auto doc = rdf::parse_turtle(turtle);
  const auto type = rdf::rdf("type");
  const std::set<std::string> class_types = {rdf::rdfs("Class"), std::string(rdf::kOwl) + "Class"};
  const std::set<std::string> property_types = {rdf::rdf("Property"), std::string(rdf::kOwl) + "ObjectProperty",
                                                std::string(rdf::kOwl) + "DatatypeProperty"};
  for (const auto& t : doc.graph) {
    if (t.predicate != type || !t.object.is_iri()) continue;
    if (class_types.count(t.object.value)) terms.classes.insert(t.subject);
    else if (property_types.count(t.object.value)) terms.properties.insert(t.subject);
  }
  return terms;
}

OntologyTerms load_ontology_terms(const std::filesystem::path& file) {
  return parse_ontology_terms(fileio::read_file(file));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Core W3C vocabularies are always available to mappings.
bool well_known(std::string_view iri) {
  for (auto ns : {rdf::kRdf, rdf::kRdfs, rdf::kOwl, rdf::kSkos})
    if (iri.starts_with(ns)) return true;
  return false;
}

bool terminal_accepts(TerminalKind t, schema::Kind k) {
  using schema::Kind;
  switch (t) {
    case TerminalKind::entity_ref: return k == Kind::entity_link;
    case TerminalKind::term_ref: return k == Kind::vocab_term || k == Kind::thesaurus_term;
    case TerminalKind::timespan: return k == Kind::time_expression;
    case TerminalKind::coordinates: return k == Kind::geo_coordinates || k == Kind::geo_external_id;
    case TerminalKind::literal:
      return k == Kind::text_plain || k == Kind::text_formatted || k == Kind::number || k == Kind::time_expression ||
             k == Kind::digital_file;
  }
  return false;
}

}  // namespace

std::vector<Issue> validate_mapping(const MappingSpec& spec, const schema::EntityTypeSchema& schema,
                                    const OntologyTerms& terms) {
  std::vector<Issue> issues;
  auto term_issue = [&](const std::string& iri, bool is_class, const std::string& where) {
    if (iri.empty()) {
      issues.push_back({Severity::error, "missing-term", where, std::string(is_class ? "class" : "property") + " missing"});
      return;
    }
    if (well_known(iri)) return;
    bool ok = is_class ? terms.classes.count(iri) > 0 : terms.properties.count(iri) > 0;
    if (!ok) {
      auto shown = rdf::compact_iri(iri, spec.prefixes);
      issues.push_back({Severity::error, "unknown-term", where,
                        (shown.empty() ? iri : shown) + " is not a known ontology " + (is_class ? "class" : "property")});
    }
  };
  auto slug_issue = [&](const UriPolicy& p, const FieldPath& base, const std::string& where) {
    if (const auto* s = std::get_if<LabelSlug>(&p)) {
      if (schema::find_node(schema, base.concat(s->field)).field == nullptr)
        issues.push_back({Severity::error, "unknown-source-path", where, "slug field " + s->field.str() + " does not resolve"});
    }
  };

  if (spec.domain.source_type != schema.type_name)
    issues.push_back({Severity::error, "domain-type-mismatch", "domain",
                      "mapping is for " + spec.domain.source_type + ", schema is " + schema.type_name});
  term_issue(spec.domain.class_iri, true, "domain");
  slug_issue(spec.domain.uri, {}, "domain");
  if (const auto* h = std::get_if<HashOf>(&spec.domain.uri); !h || h->components != std::vector<std::string>{"type", "id"})
    issues.push_back({Severity::warning, "domain-uri-not-shared", "domain",
                      "entity links and the naive export address entities by hash(type,id)"});

  std::set<int> checked_groups;
  for (const auto& rule : spec.links) {
    const auto where = rule.source.str();
    auto node = schema::find_node(schema, rule.source);
    if (node.group == nullptr && node.field == nullptr) {
      if (checked_groups.insert(rule.group).second)
        issues.push_back({Severity::error, "unknown-source-path", where, where + " is not in " + schema.type_name});
      continue;
    }
    if (checked_groups.insert(rule.group).second) {
      for (const auto& step : rule.chain) {
        term_issue(step.property, false, where);
        term_issue(step.class_iri, true, where);
        slug_issue(step.uri, rule.source, where);
      }
    }
    term_issue(rule.terminal.property, false, where);

    const auto leaf = rule.source.concat(rule.terminal.source);
    auto leaf_node = schema::find_node(schema, leaf);
    if (leaf_node.field == nullptr) {
      issues.push_back({Severity::error, leaf_node.group ? "not-a-leaf" : "unknown-source-path", leaf.str(),
                        leaf.str() + " is not a field of " + schema.type_name});
      continue;
    }
    const auto& kind = leaf_node.field->kind;
    if (!terminal_accepts(rule.terminal.kind, kind.kind)) {
      issues.push_back({Severity::error, "terminal-kind-mismatch", leaf.str(),
                        std::string(to_string(rule.terminal.kind)) + " terminal on " +
                            std::string(schema::to_string(kind.kind)) + " field"});
    } else if (rule.terminal.kind == TerminalKind::entity_ref && !rule.terminal.target_type.empty() &&
               std::find(kind.targets.begin(), kind.targets.end(), rule.terminal.target_type) == kind.targets.end()) {
      issues.push_back({Severity::error, "terminal-kind-mismatch", leaf.str(),
                        rule.terminal.target_type + " is not a permitted link target"});
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Transformation

std::string to_wkt(const docs::Coordinates& c) {
  auto pt = [](const docs::LatLon& p) { return text::format_double(p.lon) + " " + text::format_double(p.lat); };
  if (c.shape == docs::Coordinates::Shape::point) return c.points.empty() ? "POINT EMPTY" : "POINT(" + pt(c.points.front()) + ")";
  std::vector<std::string> ring;
  for (const auto& p : c.points) ring.push_back(pt(p));
  if (!c.points.empty() && !(c.points.front() == c.points.back())) ring.push_back(pt(c.points.front()));
  return "POLYGON((" + text::join(ring, ", ") + "))";
}

namespace {

using docs::EntityDocument;
using docs::FieldValue;

const std::string& type_iri() {
  static const std::string t = rdf::rdf("type");
  return t;
}

std::set<FieldPath> instances_of(const EntityDocument& doc, const FieldPath& source) {
  std::set<FieldPath> out;
  for (const auto& [path, v] : doc.values) {
    if (path.size() < source.size()) continue;
    auto head = path.prefix(source.size());
    if (head.same_template(source)) out.insert(std::move(head));
  }
  return out;
}

std::vector<std::pair<FieldPath, const FieldValue*>> values_under(const EntityDocument& doc, const FieldPath& instance,
                                                                  const FieldPath& rel) {
  std::vector<std::pair<FieldPath, const FieldValue*>> out;
  for (const auto& [path, v] : doc.values) {
    if (path.size() != instance.size() + rel.size() || !path.starts_with(instance)) continue;
    FieldPath tail(std::vector<schema::PathSegment>(path.segments().begin() + instance.size(), path.segments().end()));
    if (tail.same_template(rel)) out.emplace_back(path, &v);
  }
  return out;
}

std::string slug_label(const EntityDocument& doc, const FieldPath& instance, const UriPolicy& policy) {
  const auto* s = std::get_if<LabelSlug>(&policy);
  if (s == nullptr) return {};
  auto vals = values_under(doc, instance, s->field);
  return vals.empty() ? std::string() : docs::display_text(*vals.front().second);
}

void emit_terminal(rdf::Graph& g, const std::string& node, const Terminal& t, const FieldPath& path,
                   const FieldValue& value, const EntityDocument& doc, const std::string& base) {
  using rdf::Term;
  switch (t.kind) {
    case TerminalKind::entity_ref: {
      const auto* l = std::get_if<docs::EntityLink>(&value);
      if (l == nullptr) throw Error(Errc::type_mismatch, path.str() + " holds no entity link");
      g.add(node, t.property, Term::iri(entity_iri(base, l->target_type, l->target_id)));
      return;
    }
    case TerminalKind::term_ref: {
      std::string iri, label;
      if (const auto* r = std::get_if<docs::TermRef>(&value)) {
        iri = vocab::term_iri(base, r->vocab, r->term_id);
        label = r->label;
      } else if (const auto* c = std::get_if<docs::ThesaurusRef>(&value)) {
        iri = vocab::concept_iri(base, c->thesaurus, c->concept_id);
        label = c->label;
      } else {
        throw Error(Errc::type_mismatch, path.str() + " holds no term");
      }
      g.add(node, t.property, Term::iri(iri));
      g.add(iri, type_iri(), Term::iri(rdf::crm("E55_Type")));
      if (!label.empty()) g.add(iri, rdf::rdfs("label"), Term::literal(label));
      return;
    }
    case TerminalKind::timespan: {
      const auto* tv = std::get_if<docs::TimeVal>(&value);
      if (tv == nullptr) throw Error(Errc::type_mismatch, path.str() + " holds no time expression");
      UriInputs in;
      in.type = doc.type_name;
      in.id = doc.id;
      in.path = path.str();
      auto span = generate_uri(HashOf{{"type", "id", "path", "'time-span'"}}, in, base);
      g.add(node, t.property, Term::iri(span));
      g.add(span, type_iri(), Term::iri(rdf::crm("E52_Time-Span")));
      g.add(span, rdf::crm("P82a_begin_of_the_begin"), Term::literal(std::to_string(tv->span.earliest), rdf::xsd("integer")));
      g.add(span, rdf::crm("P82b_end_of_the_end"), Term::literal(std::to_string(tv->span.latest), rdf::xsd("integer")));
      g.add(span, rdf::rdfs("label"), Term::literal(tv->expr));
      return;
    }
    case TerminalKind::coordinates: {
      const auto wkt_type = std::string(rdf::kGeo) + "wktLiteral";
      if (const auto* c = std::get_if<docs::Coordinates>(&value))
        g.add(node, t.property, Term::literal(to_wkt(*c), wkt_type));
      else if (const auto* p = std::get_if<docs::ExternalPlace>(&value))
        g.add(node, t.property, Term::literal(to_wkt({docs::Coordinates::Shape::point, {{p->lat, p->lon}}}), wkt_type));
      else
        throw Error(Errc::type_mismatch, path.str() + " holds no coordinates");
      return;
    }
    case TerminalKind::literal: {
      if (const auto* n = std::get_if<docs::NumberVal>(&value)) {
        g.add(node, t.property, Term::literal(docs::decimal_lexical(n->value), t.datatype.empty() ? rdf::xsd("decimal") : t.datatype));
        return;
      }
      std::string lexical;
      if (const auto* tv = std::get_if<docs::TimeVal>(&value)) lexical = tv->expr;
      else if (const auto* f = std::get_if<docs::FormattedText>(&value)) lexical = f->markup;
      else lexical = docs::display_text(value);
      g.add(node, t.property, Term::literal(lexical, t.language.empty() ? t.datatype : std::string(), t.language));
      return;
    }
  }
}

}  // namespace

rdf::Graph transform_entity(const EntityDocument& doc, const MappingSpec& spec, std::string_view base_iri) {
  const auto base = strip_base(base_iri);
  rdf::Graph g;
  const auto subject = generate_uri(spec.domain.uri,
                                    {doc.type_name, doc.id, {}, spec.domain.class_iri, {},
                                     slug_label(doc, {}, spec.domain.uri)},
                                    base);
  g.add(subject, type_iri(), rdf::Term::iri(spec.domain.class_iri));

  for (const auto& rule : spec.links) {
    for (const auto& instance : instances_of(doc, rule.source)) {
      auto vals = values_under(doc, instance, rule.terminal.source);
      if (vals.empty()) continue;
      // Chain nodes hash the concrete instance path, so each repetition of
      // a group gets its own nodes and sibling rules in a group share them.
      std::string node = subject;
      for (const auto& step : rule.chain) {
        auto iri = generate_uri(step.uri,
                                {doc.type_name, doc.id, instance.str(), step.class_iri, step.property,
                                 slug_label(doc, instance, step.uri)},
                                base);
        g.add(node, step.property, rdf::Term::iri(iri));
        g.add(iri, type_iri(), rdf::Term::iri(step.class_iri));
        node = std::move(iri);
      }
      for (const auto& [path, value] : vals) emit_terminal(g, node, rule.terminal, path, *value, doc, base);
    }
  }
  return g;
}

std::string naive_namespace(std::string_view base_iri) { return strip_base(base_iri) + "/schema/naive/"; }

rdf::Graph naive_export(const EntityDocument& doc, std::string_view base_iri) {
  using rdf::Term;
  const auto ns = naive_namespace(base_iri);
  const auto subject = entity_iri(base_iri, doc.type_name, doc.id);
  rdf::Graph g;
  g.add(subject, type_iri(), Term::iri(ns + "class/" + text::percent_encode(doc.type_name)));
  for (const auto& [path, value] : doc.values) {
    const auto predicate = ns + text::percent_encode(path.without_indices().str(), "/");
    if (const auto* l = std::get_if<docs::EntityLink>(&value))
      g.add(subject, predicate, Term::iri(entity_iri(base_iri, l->target_type, l->target_id)));
    else if (const auto* n = std::get_if<docs::NumberVal>(&value))
      g.add(subject, predicate, Term::literal(docs::decimal_lexical(n->value), rdf::xsd("decimal")));
    else if (const auto* c = std::get_if<docs::Coordinates>(&value))
      g.add(subject, predicate, Term::literal(to_wkt(*c), std::string(rdf::kGeo) + "wktLiteral"));
    else if (const auto* t = std::get_if<docs::TimeVal>(&value))
      g.add(subject, predicate, Term::literal(t->expr));
    else if (const auto* f = std::get_if<docs::FormattedText>(&value))
      g.add(subject, predicate, Term::literal(f->markup));
    else
      g.add(subject, predicate, Term::literal(docs::display_text(value)));
  }
  return g;
}

}  // namespace scriptorium::mapping
