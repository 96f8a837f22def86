#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scriptorium/docs.hpp"
#include "scriptorium/error.hpp"
#include "scriptorium/rdf.hpp"
#include "scriptorium/schema.hpp"

namespace scriptorium::mapping {

using schema::FieldPath;

/// Components are evaluated and joined with '|' before hashing. Recognised
/// names: type, id, path, class, property; anything quoted is a constant.
struct HashOf {
  std::vector<std::string> components;
  bool operator==(const HashOf&) const = default;
};
struct LabelSlug {
  FieldPath field;  // relative to the node's source instance
  std::string prefix;
  bool operator==(const LabelSlug&) const = default;
};
struct Fixed {
  std::string iri;
  bool operator==(const Fixed&) const = default;
};
using UriPolicy = std::variant<HashOf, LabelSlug, Fixed>;

/// Parses `hash(type,id)`, `slug(place,Name)` or `fixed(IRI)`.
UriPolicy parse_uri_policy(std::string_view expr, const rdf::Prefixes& prefixes);
std::string to_string(const UriPolicy& policy);

struct UriInputs {
  std::string type;
  std::string id;
  std::string path;
  std::string class_iri;
  std::string property;
  std::string label;  // LabelSlug source value, resolved by the caller
};

/// Throws missing_input when the policy needs an empty input.
std::string generate_uri(const UriPolicy& policy, const UriInputs& inputs, std::string_view base_iri);

/// The IRI every export uses for an entity.
std::string entity_iri(std::string_view base_iri, std::string_view type_name, std::string_view entity_id);

struct Step {
  std::string property;  // expanded IRIs from here on
  std::string class_iri;
  UriPolicy uri;
  bool operator==(const Step&) const = default;
};

enum class TerminalKind { entity_ref, term_ref, literal, timespan, coordinates };
std::string_view to_string(TerminalKind k);

struct Terminal {
  TerminalKind kind = TerminalKind::literal;
  FieldPath source;  // relative to the rule source; empty means the source itself
  std::string property;
  std::string datatype;     // literal
  std::string language;     // literal
  std::string target_type;  // entity_ref, optional
  bool operator==(const Terminal&) const = default;
};

struct LinkRule {
  FieldPath source;  // index-free
  std::vector<Step> chain;
  Terminal terminal;
  int group = 0;  // rules from one <link> element share a group and chain
  bool operator==(const LinkRule&) const = default;
};

struct Domain {
  std::string source_type;
  std::string class_iri;
  UriPolicy uri;
  bool operator==(const Domain&) const = default;
};

struct MappingSpec {
  std::string ontology;
  rdf::Prefixes prefixes;
  Domain domain;
  std::vector<LinkRule> links;
  bool operator==(const MappingSpec&) const = default;
};

/// Throws syntax, undeclared_prefix, missing_domain or malformed_path.
MappingSpec parse_mapping(std::string_view xml_text);
MappingSpec load_mapping(const std::filesystem::path& file);
/// `*.xml` in `dir`, keyed by domain source type.
std::map<std::string, MappingSpec> load_mapping_dir(const std::filesystem::path& dir);

struct OntologyTerms {
  std::set<std::string> classes;
  std::set<std::string> properties;
  bool contains(std::string_view iri) const { return classes.count(std::string(iri)) || properties.count(std::string(iri)); }
  size_t size() const { return classes.size() + properties.size(); }
};

/// Reads a Turtle snapshot listing `rdfs:Class` and `rdf:Property` subjects.
OntologyTerms load_ontology_terms(const std::filesystem::path& file);
OntologyTerms parse_ontology_terms(std::string_view turtle);

std::vector<Issue> validate_mapping(const MappingSpec& spec, const schema::EntityTypeSchema& schema,
                                    const OntologyTerms& terms);

rdf::Graph transform_entity(const docs::EntityDocument& doc, const MappingSpec& spec, std::string_view base_iri);

std::string naive_namespace(std::string_view base_iri);
/// One triple per filled leaf plus the type triple.
rdf::Graph naive_export(const docs::EntityDocument& doc, std::string_view base_iri);

/// "POINT(lon lat)" or "POLYGON((...))" with the ring closed.
std::string to_wkt(const docs::Coordinates& c);

}  // namespace scriptorium::mapping
