#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace scriptorium::rdf {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kCrm = "http://www.cidoc-crm.org/cidoc-crm/";
inline constexpr std::string_view kGeo = "http://www.opengis.net/ont/geosparql#";

std::string rdf(std::string_view local);
std::string rdfs(std::string_view local);
std::string xsd(std::string_view local);
std::string skos(std::string_view local);
std::string crm(std::string_view local);

/// IRI or literal. Literals with an xsd:string datatype are stored with an
/// empty datatype so both spellings compare equal.
struct Term {
  enum class Kind { iri, literal };
  Kind kind = Kind::iri;
  std::string value;
  std::string datatype;
  std::string language;

  static Term iri(std::string v) { return {Kind::iri, std::move(v), {}, {}}; }
  static Term literal(std::string lexical, std::string datatype = {}, std::string language = {});

  bool is_iri() const noexcept { return kind == Kind::iri; }
  auto operator<=>(const Term&) const = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

using Prefixes = std::map<std::string, std::string>;

/// Set of triples; duplicates collapse.
class Graph {
 public:
  using const_iterator = std::set<Triple>::const_iterator;

  void add(std::string subject, std::string predicate, Term object);
  void add(Triple t) { triples_.insert(std::move(t)); }
  void merge(const Graph& other) { triples_.insert(other.triples_.begin(), other.triples_.end()); }

  size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }
  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  /// Subjects having `rdf:type <cls>`.
  std::set<std::string> instances_of(std::string_view class_iri) const;
  std::set<Term> objects(std::string_view subject, std::string_view predicate) const;
  size_t count_predicate(std::string_view predicate) const;

  bool operator==(const Graph&) const = default;

 private:
  std::set<Triple> triples_;
};

enum class Format { ntriples, turtle };

/// Canonical N-Triples: one line per triple, lines sorted bytewise.
std::string to_ntriples(const Graph& g);
/// Prefixed Turtle grouped by subject; subjects and predicates sorted.
std::string to_turtle(const Graph& g, const Prefixes& prefixes);
std::string serialize_graph(const Graph& g, Format format, const Prefixes& prefixes = {});

Graph parse_ntriples(std::string_view text);

struct TurtleDocument {
  Graph graph;
  Prefixes prefixes;
};

TurtleDocument parse_turtle(std::string_view text);

std::string ntriples_term(const Term& t);

/// Expands `prefix:local` against `prefixes`; throws undeclared_prefix.
std::string expand_curie(std::string_view curie, const Prefixes& prefixes);
/// Best CURIE for an IRI or empty when no prefix matches.
std::string compact_iri(std::string_view iri, const Prefixes& prefixes);

Prefixes standard_prefixes();

}  // namespace scriptorium::rdf
