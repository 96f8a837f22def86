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
#include "scriptorium/rdf.hpp"
#include "scriptorium/schema.hpp"

namespace scriptorium::vocab {

using schema::Labels;
using schema::VocabMode;

struct Term {
  std::string term_id;
  Labels labels;
  std::string created_by;
  bool deprecated = false;
  std::string merged_into;  // non-empty implies deprecated

  bool operator==(const Term&) const = default;
};

struct Vocabulary {
  std::string vocab_id;
  std::string name;
  VocabMode mode = VocabMode::dynamic;
  std::string default_language = "en";
  std::map<std::string, Term> terms;  // keyed by term id

  const Term* find(std::string_view term_id) const;
  /// Non-deprecated term whose label in `lang` matches under normalize_label.
  const Term* find_by_label(std::string_view label, std::string_view lang) const;
  /// Label in `lang`, else the default language, else any label.
  std::string label_of(std::string_view term_id, std::string_view lang = {}) const;

  bool operator==(const Vocabulary&) const = default;
};

struct AddResult {
  std::string term_id;
  bool created = false;
};

struct ImportReport {
  size_t lines = 0;
  size_t created = 0;
  size_t updated = 0;
  size_t unchanged = 0;
};

/// Read access the document store needs for TermRef validation.
class TermResolver {
 public:
  virtual ~TermResolver() = default;
  virtual std::optional<VocabMode> vocabulary_mode(std::string_view vocab_id) const = 0;
  virtual bool term_exists(std::string_view vocab_id, std::string_view term_id) const = 0;
  virtual bool concept_exists(std::string_view thesaurus_id, std::string_view concept_id) const = 0;
};

struct ThesaurusConcept {
  std::string concept_id;
  Labels pref_labels;
  std::map<std::string, std::vector<std::string>> alt_labels;
  std::set<std::string> broader;

  bool operator==(const ThesaurusConcept&) const = default;
};

class Thesaurus {
 public:
  Thesaurus() = default;
  Thesaurus(std::string id, std::string name) : id_(std::move(id)), name_(std::move(name)) {}

  const std::string& id() const noexcept { return id_; }
  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, ThesaurusConcept>& concepts() const noexcept { return concepts_; }
  const ThesaurusConcept* find(std::string_view concept_id) const;

  /// Throws collision when the id exists, unknown_concept for a missing parent.
  const ThesaurusConcept& add_concept(ThesaurusConcept c);
  /// Throws cycle_detected when `broader` already sits below `concept_id`.
  const ThesaurusConcept& set_broader(const std::string& concept_id, const std::string& broader);
  const ThesaurusConcept& remove_broader(const std::string& concept_id, const std::string& broader);

  /// Inverse of broader, computed on demand so it cannot drift.
  std::set<std::string> narrower(std::string_view concept_id) const;
  std::vector<std::string> top_concepts() const;
  /// True when `descendant` reaches `ancestor` by following broader links.
  bool reaches(const std::string& descendant, const std::string& ancestor) const;

  std::string to_xml() const;
  static Thesaurus from_xml(std::string_view xml_text);

  bool operator==(const Thesaurus&) const = default;

 private:
  ThesaurusConcept& require(const std::string& concept_id);

  std::string id_;
  std::string name_;
  std::map<std::string, ThesaurusConcept> concepts_;
};

struct AddConcept {
  ThesaurusConcept concept_;
};
struct SetBroader {
  std::string concept_id;
  std::string broader;
};
struct RemoveBroader {
  std::string concept_id;
  std::string broader;
};
using ThesaurusCommand = std::variant<AddConcept, SetBroader, RemoveBroader>;

std::string term_iri(std::string_view base, std::string_view vocab_id, std::string_view term_id);
std::string concept_iri(std::string_view base, std::string_view thesaurus_id, std::string_view concept_id);
std::string scheme_iri(std::string_view base, std::string_view thesaurus_id);

rdf::Graph export_thesaurus_skos(const Thesaurus& thesaurus, std::string_view base_iri);

/// Vocabularies and thesauri. Separate maps; terms never migrate between them.
class VocabularyService : public TermResolver {
 public:
  void define_vocabulary(Vocabulary v);
  void define_thesaurus(Thesaurus t);

  std::optional<Vocabulary> vocabulary(std::string_view vocab_id) const;
  std::vector<std::string> vocabulary_ids() const;
  std::optional<Thesaurus> thesaurus(std::string_view thesaurus_id) const;
  std::vector<std::string> thesaurus_ids() const;
  std::map<std::string, VocabMode> catalog() const;

  /// Data-entry path. Static vocabularies reject it.
  AddResult add_term(const std::string& vocab_id, std::string_view label, const std::string& lang,
                     const access::User& actor);
  /// Administrative path; works on static vocabularies too. Requires manage-vocab.
  AddResult admin_add_term(const std::string& vocab_id, std::string_view label, const std::string& lang,
                           const access::User& actor, std::string term_id = {});
  void set_label(const std::string& vocab_id, const std::string& term_id, const std::string& lang,
                 std::string_view label, const access::User& actor);

  /// Clusters of term ids whose labels agree under fold_aggressive.
  std::vector<std::vector<std::string>> find_duplicate_candidates(const std::string& vocab_id) const;

  /// Marks losers deprecated with merged_into = winner. Does not touch
  /// documents; callers rewrite references.
  void deprecate_into(const std::string& vocab_id, const std::string& winner,
                      const std::vector<std::string>& losers);

  std::string export_vocabulary(const std::string& vocab_id) const;
  ImportReport import_vocabulary(const std::string& vocab_id, std::string_view lines, const access::User& actor);

  ThesaurusConcept manage_thesaurus(const std::string& thesaurus_id, const ThesaurusCommand& command,
                                    const access::User& actor);

  std::optional<VocabMode> vocabulary_mode(std::string_view vocab_id) const override;
  bool term_exists(std::string_view vocab_id, std::string_view term_id) const override;
  bool concept_exists(std::string_view thesaurus_id, std::string_view concept_id) const override;
  std::string term_label(std::string_view vocab_id, std::string_view term_id, std::string_view lang = {}) const;
  std::string concept_label(std::string_view thesaurus_id, std::string_view concept_id,
                            std::string_view lang = {}) const;

  /// admin/vocab-{id}.xml and admin/thesaurus-{id}.xml under `dir`.
  void save(const std::filesystem::path& dir) const;
  void load(const std::filesystem::path& dir);

 private:
  void require_manage(const access::User& actor) const;
  AddResult add_locked(Vocabulary& v, std::string_view label, const std::string& lang, const std::string& actor,
                       std::string term_id);

  mutable std::shared_mutex mutex_;
  std::map<std::string, Vocabulary, std::less<>> vocabularies_;
  std::map<std::string, Thesaurus, std::less<>> thesauri_;
};

std::string vocabulary_to_xml(const Vocabulary& v);
Vocabulary vocabulary_from_xml(std::string_view xml_text);

/// Reads a vocabulary catalog (`<vocabularies><vocabulary id name mode lang/>`)
/// and the `{id}.tsv` seed next to it.
std::vector<Vocabulary> load_seed_vocabularies(const std::filesystem::path& dir);

}  // namespace scriptorium::vocab
