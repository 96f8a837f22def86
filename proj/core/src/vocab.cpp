#include "scriptorium/vocab.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "scriptorium/error.hpp"
#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"
#include "scriptorium/xml.hpp"

namespace scriptorium::vocab {

namespace {

// Trim and collapse whitespace but keep the editor's casing.
std::string tidy_label(std::string_view label) {
  std::string out;
  bool space = false;
  for (char c : text::trim(label)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string ascii_slug(std::string_view label) {
  std::string out;
  for (char c : text::slugify(label))
    if (static_cast<unsigned char>(c) < 0x80) out += c;
  while (!out.empty() && out.back() == '-') out.pop_back();
  while (!out.empty() && out.front() == '-') out.erase(out.begin());
  return out.empty() ? std::string("term") : out;
}

VocabMode parse_mode(std::string_view s) {
  if (s == "static") return VocabMode::static_;
  if (s == "dynamic") return VocabMode::dynamic;
  throw Error(Errc::syntax, "unknown vocabulary mode '" + std::string(s) + "'");
}

}  // namespace

const Term* Vocabulary::find(std::string_view term_id) const {
  auto it = terms.find(std::string(term_id));
  return it == terms.end() ? nullptr : &it->second;
}

const Term* Vocabulary::find_by_label(std::string_view label, std::string_view lang) const {
  const auto key = text::normalize_label(label);
  for (const auto& [id, term] : terms) {
    if (term.deprecated) continue;
    auto it = term.labels.find(std::string(lang));
    if (it != term.labels.end() && text::normalize_label(it->second) == key) return &term;
  }
  return nullptr;
}

std::string Vocabulary::label_of(std::string_view term_id, std::string_view lang) const {
  const Term* t = find(term_id);
  if (t == nullptr || t->labels.empty()) return std::string(term_id);
  for (auto want : {lang, std::string_view(default_language)}) {
    auto it = t->labels.find(std::string(want));
    if (it != t->labels.end()) return it->second;
  }
  return t->labels.begin()->second;
}

// ---------------------------------------------------------------------------
// Thesaurus

const ThesaurusConcept* Thesaurus::find(std::string_view concept_id) const {
  auto it = concepts_.find(std::string(concept_id));
  return it == concepts_.end() ? nullptr : &it->second;
}

ThesaurusConcept& Thesaurus::require(const std::string& concept_id) {
  auto it = concepts_.find(concept_id);
  if (it == concepts_.end())
    throw Error(Errc::unknown_concept, "no concept '" + concept_id + "' in thesaurus '" + id_ + "'");
  return it->second;
}

const ThesaurusConcept& Thesaurus::add_concept(ThesaurusConcept c) {
  if (c.concept_id.empty()) throw Error(Errc::empty_label, "concept id must not be empty");
  if (concepts_.count(c.concept_id)) throw Error(Errc::collision, "concept '" + c.concept_id + "' exists");
  for (const auto& b : c.broader) {
    if (b == c.concept_id) throw Error(Errc::cycle_detected, "concept cannot be broader than itself");
    require(b);
  }
  auto id = c.concept_id;
  return concepts_.emplace(id, std::move(c)).first->second;
}

bool Thesaurus::reaches(const std::string& descendant, const std::string& ancestor) const {
  std::vector<std::string> stack{descendant};
  std::set<std::string> seen;
  while (!stack.empty()) {
    auto cur = std::move(stack.back());
    stack.pop_back();
    if (cur == ancestor) return true;
    if (!seen.insert(cur).second) continue;
    if (const auto* c = find(cur)) stack.insert(stack.end(), c->broader.begin(), c->broader.end());
  }
  return false;
}

const ThesaurusConcept& Thesaurus::set_broader(const std::string& concept_id, const std::string& broader) {
  auto& c = require(concept_id);
  require(broader);
  if (reaches(broader, concept_id))
    throw Error(Errc::cycle_detected, "'" + broader + "' is already narrower than '" + concept_id + "'");
  c.broader.insert(broader);
  return c;
}

const ThesaurusConcept& Thesaurus::remove_broader(const std::string& concept_id, const std::string& broader) {
  auto& c = require(concept_id);
  c.broader.erase(broader);
  return c;
}

std::set<std::string> Thesaurus::narrower(std::string_view concept_id) const {
  std::set<std::string> out;
  for (const auto& [id, c] : concepts_)
    if (c.broader.count(std::string(concept_id))) out.insert(id);
  return out;
}

std::vector<std::string> Thesaurus::top_concepts() const {
  std::vector<std::string> out;
  for (const auto& [id, c] : concepts_)
    if (c.broader.empty()) out.push_back(id);
  return out;
}

std::string Thesaurus::to_xml() const {
  xml::Element root("thesaurus");
  root.set("id", id_).set("name", name_);
  for (const auto& [id, c] : concepts_) {
    xml::Element e("concept");
    e.set("id", id);
    for (const auto& [lang, label] : c.pref_labels) e.add_text("pref", label).set("lang", lang);
    for (const auto& [lang, labels] : c.alt_labels)
      for (const auto& label : labels) e.add_text("alt", label).set("lang", lang);
    for (const auto& b : c.broader) e.add(xml::Element("broader")).set("ref", b);
    root.add(std::move(e));
  }
  return xml::write(root);
}

Thesaurus Thesaurus::from_xml(std::string_view xml_text) {
  auto root = xml::parse(xml_text);
  if (root.name != "thesaurus") throw Error(Errc::syntax, "expected <thesaurus> root");
  Thesaurus t(root.attr_or("id", ""), root.attr_or("name", ""));
  // Broader links may point forward, so insert concepts first.
  std::vector<std::pair<std::string, std::string>> links;
  for (const auto* e : root.all("concept")) {
    ThesaurusConcept c;
    c.concept_id = e->attr_or("id", "");
    for (const auto* p : e->all("pref")) c.pref_labels[p->attr_or("lang", "en")] = p->text;
    for (const auto* a : e->all("alt")) c.alt_labels[a->attr_or("lang", "en")].push_back(a->text);
    for (const auto* b : e->all("broader")) links.emplace_back(c.concept_id, b->attr_or("ref", ""));
    t.add_concept(std::move(c));
  }
  for (const auto& [c, b] : links) t.set_broader(c, b);
  return t;
}

std::string term_iri(std::string_view base, std::string_view vocab_id, std::string_view term_id) {
  return std::string(base) + "/vocab/" + text::percent_encode(vocab_id) + "/" + text::percent_encode(term_id);
}

std::string scheme_iri(std::string_view base, std::string_view thesaurus_id) {
  return std::string(base) + "/thesaurus/" + text::percent_encode(thesaurus_id);
}

std::string concept_iri(std::string_view base, std::string_view thesaurus_id, std::string_view concept_id) {
  return scheme_iri(base, thesaurus_id) + "/" + text::percent_encode(concept_id);
}

rdf::Graph export_thesaurus_skos(const Thesaurus& thesaurus, std::string_view base_iri) {
  using rdf::skos;
  rdf::Graph g;
  const auto scheme = scheme_iri(base_iri, thesaurus.id());
  g.add(scheme, rdf::rdf("type"), rdf::Term::iri(skos("ConceptScheme")));
  for (const auto& [id, c] : thesaurus.concepts()) {
    const auto iri = concept_iri(base_iri, thesaurus.id(), id);
    g.add(iri, rdf::rdf("type"), rdf::Term::iri(skos("Concept")));
    g.add(iri, skos("inScheme"), rdf::Term::iri(scheme));
    for (const auto& [lang, label] : c.pref_labels) g.add(iri, skos("prefLabel"), rdf::Term::literal(label, {}, lang));
    for (const auto& [lang, labels] : c.alt_labels)
      for (const auto& label : labels) g.add(iri, skos("altLabel"), rdf::Term::literal(label, {}, lang));
    for (const auto& b : c.broader) {
      const auto biri = concept_iri(base_iri, thesaurus.id(), b);
      g.add(iri, skos("broader"), rdf::Term::iri(biri));
      g.add(biri, skos("narrower"), rdf::Term::iri(iri));
    }
    if (c.broader.empty()) g.add(scheme, skos("hasTopConcept"), rdf::Term::iri(iri));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Vocabulary XML

std::string vocabulary_to_xml(const Vocabulary& v) {
  xml::Element root("vocabulary");
  root.set("id", v.vocab_id)
      .set("name", v.name)
      .set("mode", std::string(schema::to_string(v.mode)))
      .set("lang", v.default_language);
  for (const auto& [id, t] : v.terms) {
    xml::Element e("term");
    e.set("id", id);
    if (!t.created_by.empty()) e.set("created-by", t.created_by);
    if (t.deprecated) e.set("deprecated", "true");
    if (!t.merged_into.empty()) e.set("merged-into", t.merged_into);
    for (const auto& [lang, label] : t.labels) e.add_text("label", label).set("lang", lang);
    root.add(std::move(e));
  }
  return xml::write(root);
}

Vocabulary vocabulary_from_xml(std::string_view xml_text) {
  auto root = xml::parse(xml_text);
  if (root.name != "vocabulary") throw Error(Errc::syntax, "expected <vocabulary> root");
  Vocabulary v;
  v.vocab_id = root.attr_or("id", "");
  v.name = root.attr_or("name", v.vocab_id);
  v.mode = parse_mode(root.attr_or("mode", "dynamic"));
  v.default_language = root.attr_or("lang", "en");
  for (const auto* e : root.all("term")) {
    Term t;
    t.term_id = e->attr_or("id", "");
    t.created_by = e->attr_or("created-by", "");
    t.deprecated = e->attr_or("deprecated", "false") == "true";
    t.merged_into = e->attr_or("merged-into", "");
    for (const auto* l : e->all("label")) t.labels[l->attr_or("lang", v.default_language)] = l->text;
    v.terms.emplace(t.term_id, std::move(t));
  }
  return v;
}

std::vector<Vocabulary> load_seed_vocabularies(const std::filesystem::path& dir) {
  auto root = xml::parse(fileio::read_file(dir / "catalog.xml"));
  std::vector<Vocabulary> out;
  for (const auto* e : root.all("vocabulary")) {
    Vocabulary v;
    v.vocab_id = e->attr_or("id", "");
    v.name = e->attr_or("name", v.vocab_id);
    v.mode = parse_mode(e->attr_or("mode", "dynamic"));
    v.default_language = e->attr_or("lang", "en");
    auto tsv = dir / (v.vocab_id + ".tsv");
    if (std::filesystem::exists(tsv)) {
      int line_no = 0;
      for (const auto& line : text::split(fileio::read_file(tsv), '\n')) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 3)
          throw Error(Errc::malformed_line, tsv.string() + ":" + std::to_string(line_no) + ": expected 3 columns");
        auto& t = v.terms[cols[0]];
        t.term_id = cols[0];
        t.created_by = "system";
        t.labels[cols[1]] = tidy_label(cols[2]);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Service

void VocabularyService::define_vocabulary(Vocabulary v) {
  std::unique_lock lock(mutex_);
  auto id = v.vocab_id;
  vocabularies_[id] = std::move(v);
}

void VocabularyService::define_thesaurus(Thesaurus t) {
  std::unique_lock lock(mutex_);
  auto id = t.id();
  thesauri_[id] = std::move(t);
}

std::optional<Vocabulary> VocabularyService::vocabulary(std::string_view vocab_id) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> VocabularyService::vocabulary_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, v] : vocabularies_) out.push_back(id);
  return out;
}

std::optional<Thesaurus> VocabularyService::thesaurus(std::string_view thesaurus_id) const {
  std::shared_lock lock(mutex_);
  auto it = thesauri_.find(thesaurus_id);
  if (it == thesauri_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> VocabularyService::thesaurus_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, t] : thesauri_) out.push_back(id);
  return out;
}

std::map<std::string, VocabMode> VocabularyService::catalog() const {
  std::shared_lock lock(mutex_);
  std::map<std::string, VocabMode> out;
  for (const auto& [id, v] : vocabularies_) out.emplace(id, v.mode);
  return out;
}

void VocabularyService::require_manage(const access::User& actor) const {
  auto d = access::authorize(actor, access::Action::manage_vocab, access::Resource::global(), {});
  if (!d) throw Error(Errc::permission_denied, "manage-vocab required: " + d.reason);
}

AddResult VocabularyService::add_locked(Vocabulary& v, std::string_view label, const std::string& lang,
                                        const std::string& actor, std::string term_id) {
  auto tidy = tidy_label(label);
  if (tidy.empty()) throw Error(Errc::empty_label, "term label must not be empty");
  if (lang.empty()) throw Error(Errc::empty_label, "term language must not be empty");
  if (const Term* existing = v.find_by_label(tidy, lang)) return {existing->term_id, false};

  if (term_id.empty()) {
    auto base = ascii_slug(tidy);
    term_id = base;
    for (int n = 2; v.terms.count(term_id); ++n) term_id = base + "-" + std::to_string(n);
  } else if (v.terms.count(term_id)) {
    throw Error(Errc::collision, "term id '" + term_id + "' exists in '" + v.vocab_id + "'");
  }
  Term t;
  t.term_id = term_id;
  t.labels[lang] = tidy;
  t.created_by = actor;
  v.terms.emplace(term_id, std::move(t));
  return {term_id, true};
}

AddResult VocabularyService::add_term(const std::string& vocab_id, std::string_view label, const std::string& lang,
                                      const access::User& actor) {
  if (actor.role == access::Role::guest) throw Error(Errc::permission_denied, "guests cannot add terms");
  std::unique_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  if (it->second.mode == VocabMode::static_)
    throw Error(Errc::static_vocabulary_rejects_user_term,
                "vocabulary '" + vocab_id + "' is static; terms are added by administrators");
  return add_locked(it->second, label, lang, actor.user_id, {});
}

AddResult VocabularyService::admin_add_term(const std::string& vocab_id, std::string_view label,
                                            const std::string& lang, const access::User& actor,
                                            std::string term_id) {
  require_manage(actor);
  std::unique_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  return add_locked(it->second, label, lang, actor.user_id, std::move(term_id));
}

void VocabularyService::set_label(const std::string& vocab_id, const std::string& term_id, const std::string& lang,
                                  std::string_view label, const access::User& actor) {
  require_manage(actor);
  std::unique_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  auto& v = it->second;
  auto tit = v.terms.find(term_id);
  if (tit == v.terms.end()) throw Error(Errc::unknown_term, "no term '" + term_id + "'");
  auto tidy = tidy_label(label);
  if (tidy.empty()) throw Error(Errc::empty_label, "term label must not be empty");
  if (const Term* other = v.find_by_label(tidy, lang); other != nullptr && other->term_id != term_id)
    throw Error(Errc::collision, "label already used by term '" + other->term_id + "'");
  tit->second.labels[lang] = tidy;
}

std::vector<std::vector<std::string>> VocabularyService::find_duplicate_candidates(const std::string& vocab_id) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");

  std::vector<std::string> ids;
  for (const auto& [id, t] : it->second.terms)
    if (!t.deprecated) ids.push_back(id);

  std::vector<size_t> parent(ids.size());
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto root = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  std::map<std::string, size_t> first_with_key;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (const auto& [lang, label] : it->second.terms.at(ids[i]).labels) {
      auto key = text::fold_aggressive(label);
      if (key.empty()) continue;
      auto [pos, fresh] = first_with_key.emplace(key, i);
      if (!fresh) parent[root(i)] = root(pos->second);
    }
  }

  std::map<size_t, std::vector<std::string>> groups;
  for (size_t i = 0; i < ids.size(); ++i) groups[root(i)].push_back(ids[i]);
  std::vector<std::vector<std::string>> out;
  for (auto& [r, members] : groups)
    if (members.size() > 1) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

void VocabularyService::deprecate_into(const std::string& vocab_id, const std::string& winner,
                                       const std::vector<std::string>& losers) {
  std::unique_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  auto& v = it->second;
  const Term* w = v.find(winner);
  if (w == nullptr) throw Error(Errc::unknown_term, "no term '" + winner + "'");
  if (w->deprecated) throw Error(Errc::invalid_merge, "winner '" + winner + "' is deprecated");
  for (const auto& l : losers) {
    if (l == winner) throw Error(Errc::invalid_merge, "winner is among the losers");
    if (v.find(l) == nullptr) throw Error(Errc::unknown_term, "no term '" + l + "'");
  }
  for (const auto& l : losers) {
    auto& t = v.terms.at(l);
    t.deprecated = true;
    t.merged_into = winner;
  }
  // Chains stay one hop deep: anything merged into a loser now points at the winner.
  for (auto& [id, t] : v.terms)
    if (std::find(losers.begin(), losers.end(), t.merged_into) != losers.end()) t.merged_into = winner;
}

std::string VocabularyService::export_vocabulary(const std::string& vocab_id) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  std::string out;
  for (const auto& [id, t] : it->second.terms)
    for (const auto& [lang, label] : t.labels) out += id + "\t" + lang + "\t" + label + "\n";
  return out;
}

ImportReport VocabularyService::import_vocabulary(const std::string& vocab_id, std::string_view lines,
                                                  const access::User& actor) {
  require_manage(actor);

  struct Row {
    std::string id, lang, label;
  };
  std::vector<Row> rows;
  int line_no = 0;
  for (const auto& line : text::split(lines, '\n')) {
    ++line_no;
    std::string_view l = line;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (text::trim(l).empty()) continue;
    auto cols = text::split(l, '\t');
    if (cols.size() != 3)
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_no) + ": expected 3 tab-separated columns, got " +
                      std::to_string(cols.size()));
    if (cols[1].empty() || tidy_label(cols[2]).empty())
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": empty language or label");
    rows.push_back({cols[0], cols[1], cols[2]});
  }

  // Validated up front so a bad line leaves the vocabulary untouched.
  std::unique_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  auto& v = it->second;
  ImportReport report;
  for (const auto& row : rows) {
    ++report.lines;
    if (v.find_by_label(row.label, row.lang) != nullptr) {
      ++report.unchanged;
    } else if (auto tit = v.terms.find(row.id); tit != v.terms.end()) {
      tit->second.labels[row.lang] = tidy_label(row.label);
      ++report.updated;
    } else {
      add_locked(v, row.label, row.lang, actor.user_id, row.id);
      ++report.created;
    }
  }
  return report;
}

ThesaurusConcept VocabularyService::manage_thesaurus(const std::string& thesaurus_id, const ThesaurusCommand& command,
                                                     const access::User& actor) {
  require_manage(actor);
  std::unique_lock lock(mutex_);
  auto it = thesauri_.find(thesaurus_id);
  if (it == thesauri_.end()) throw Error(Errc::unknown_vocabulary, "no thesaurus '" + thesaurus_id + "'");
  auto& t = it->second;
  return std::visit(
      [&](const auto& cmd) -> ThesaurusConcept {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, AddConcept>)
          return t.add_concept(cmd.concept_);
        else if constexpr (std::is_same_v<T, SetBroader>)
          return t.set_broader(cmd.concept_id, cmd.broader);
        else
          return t.remove_broader(cmd.concept_id, cmd.broader);
      },
      command);
}

std::optional<VocabMode> VocabularyService::vocabulary_mode(std::string_view vocab_id) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) return std::nullopt;
  return it->second.mode;
}

bool VocabularyService::term_exists(std::string_view vocab_id, std::string_view term_id) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  return it != vocabularies_.end() && it->second.find(term_id) != nullptr;
}

bool VocabularyService::concept_exists(std::string_view thesaurus_id, std::string_view concept_id) const {
  std::shared_lock lock(mutex_);
  auto it = thesauri_.find(thesaurus_id);
  return it != thesauri_.end() && it->second.find(concept_id) != nullptr;
}

std::string VocabularyService::term_label(std::string_view vocab_id, std::string_view term_id,
                                          std::string_view lang) const {
  std::shared_lock lock(mutex_);
  auto it = vocabularies_.find(vocab_id);
  if (it == vocabularies_.end()) return std::string(term_id);
  return it->second.label_of(term_id, lang);
}

std::string VocabularyService::concept_label(std::string_view thesaurus_id, std::string_view concept_id,
                                             std::string_view lang) const {
  std::shared_lock lock(mutex_);
  auto it = thesauri_.find(thesaurus_id);
  if (it == thesauri_.end()) return std::string(concept_id);
  const auto* c = it->second.find(concept_id);
  if (c == nullptr || c->pref_labels.empty()) return std::string(concept_id);
  auto lit = c->pref_labels.find(std::string(lang.empty() ? "en" : lang));
  return lit != c->pref_labels.end() ? lit->second : c->pref_labels.begin()->second;
}

void VocabularyService::save(const std::filesystem::path& dir) const {
  std::shared_lock lock(mutex_);
  for (const auto& [id, v] : vocabularies_) fileio::write_file_atomic(dir / ("vocab-" + id + ".xml"), vocabulary_to_xml(v));
  for (const auto& [id, t] : thesauri_) fileio::write_file_atomic(dir / ("thesaurus-" + id + ".xml"), t.to_xml());
}

void VocabularyService::load(const std::filesystem::path& dir) {
  std::map<std::string, Vocabulary, std::less<>> vocabularies;
  std::map<std::string, Thesaurus, std::less<>> thesauri;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (!name.ends_with(".xml")) continue;
      if (name.starts_with("vocab-")) {
        auto v = vocabulary_from_xml(fileio::read_file(entry.path()));
        auto id = v.vocab_id;
        vocabularies.emplace(id, std::move(v));
      } else if (name.starts_with("thesaurus-")) {
        auto t = Thesaurus::from_xml(fileio::read_file(entry.path()));
        auto id = t.id();
        thesauri.emplace(id, std::move(t));
      }
    }
  }
  std::unique_lock lock(mutex_);
  vocabularies_ = std::move(vocabularies);
  thesauri_ = std::move(thesauri);
}

}  // namespace scriptorium::vocab
