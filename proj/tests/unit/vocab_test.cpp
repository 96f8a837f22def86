#include <gtest/gtest.h>

#include <algorithm>

#include "scriptorium/curation.hpp"
#include "scriptorium/error.hpp"
#include "scriptorium/rdf.hpp"
#include "scriptorium/text.hpp"
#include "scriptorium/vocab.hpp"
#include "testkit.hpp"

using namespace scriptorium;
using namespace scriptorium::vocab;

namespace {

class Vocab : public ::testing::Test {
 protected:
  void SetUp() override {
    ws = testkit::memory_workspace();
    cast = testkit::provision_cast(*ws);
    svc().define_vocabulary(Vocabulary{"scratch", "Scratch", VocabMode::dynamic, "en", {}});
    svc().define_vocabulary(Vocabulary{"fixed", "Fixed", VocabMode::static_, "en", {}});
  }
  VocabularyService& svc() { return ws->vocabularies(); }

  Errc error_of(const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error";
    return Errc::io;
  }

  std::vector<std::vector<std::string>> clusters_of(const std::vector<std::string>& labels) {
    svc().define_vocabulary(Vocabulary{"dups", "Dups", VocabMode::dynamic, "en", {}});
    for (const auto& l : labels) svc().add_term("dups", l, "en", cast.alice);
    auto clusters = svc().find_duplicate_candidates("dups");
    for (auto& c : clusters)
      for (auto& id : c) id = svc().term_label("dups", id);
    return clusters;
  }

  std::unique_ptr<Workspace> ws;
  testkit::Cast cast;
};

ThesaurusConcept concept_of(std::string id, std::string label) {
  ThesaurusConcept c;
  c.concept_id = std::move(id);
  c.pref_labels["en"] = std::move(label);
  return c;
}

}  // namespace

TEST_F(Vocab, AddTermDeduplicatesUnderNormalization) {
  auto first = svc().add_term("scratch", "Icon", "en", cast.alice);
  EXPECT_TRUE(first.created);
  auto again = svc().add_term("scratch", " icon ", "en", cast.amir);
  EXPECT_FALSE(again.created);
  EXPECT_EQ(again.term_id, first.term_id);
  EXPECT_FALSE(svc().add_term("scratch", "ICON", "en", cast.alice).created);
  // Same label in another language is a different term.
  EXPECT_TRUE(svc().add_term("scratch", "Icon", "el", cast.alice).created);
  EXPECT_TRUE(svc().add_term("scratch", "icon  painter", "en", cast.alice).created);
  EXPECT_FALSE(svc().add_term("scratch", "Icon Painter", "en", cast.alice).created);
}

TEST_F(Vocab, AddTermIdempotenceProperty) {
  testkit::Rng rng(4);
  const std::vector<std::string> bases = {"Icon", "Gold leaf", "Θεοτόκος", "Straße", "Saint  Nicholas"};
  auto variant = [&](std::string s) {
    std::string out = std::string(rng() % 3, ' ');
    for (char c : s) {
      if (c == ' ' && rng() % 2) out += "  ";
      else out += (rng() % 2 && c >= 'a' && c <= 'z') ? char(c - 32) : c;
    }
    return out + std::string(rng() % 3, ' ');
  };
  std::map<std::string, std::string> ids;
  for (int i = 0; i < 500; ++i) {
    const auto& base = bases[rng() % bases.size()];
    auto r = svc().add_term("scratch", variant(base), "en", cast.alice);
    auto [it, fresh] = ids.try_emplace(base, r.term_id);
    EXPECT_EQ(r.created, fresh);
    EXPECT_EQ(it->second, r.term_id);
  }
  EXPECT_EQ(svc().vocabulary("scratch")->terms.size(), bases.size());
}

TEST_F(Vocab, StaticVocabulariesRejectDataEntry) {
  EXPECT_EQ(error_of([&] { svc().add_term("fixed", "Icon", "en", cast.alice); }),
            Errc::static_vocabulary_rejects_user_term);
  EXPECT_EQ(error_of([&] { svc().add_term("unit", "furlong", "en", cast.anna); }),
            Errc::static_vocabulary_rejects_user_term);
  EXPECT_TRUE(svc().admin_add_term("fixed", "Icon", "en", cast.anna).created);
  EXPECT_THROW(svc().admin_add_term("fixed", "Other", "en", cast.alice), Error);
}

TEST_F(Vocab, AddTermErrors) {
  EXPECT_EQ(error_of([&] { svc().add_term("scratch", "   ", "en", cast.alice); }), Errc::empty_label);
  EXPECT_EQ(error_of([&] { svc().add_term("nope", "x", "en", cast.alice); }), Errc::unknown_vocabulary);
}

TEST_F(Vocab, DuplicateCandidates) {
  auto c = clusters_of({"Münster", "Munster"});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].size(), 2u);
  EXPECT_TRUE(clusters_of({"icon", "triptych"}).empty());
  c = clusters_of({"St. Nicholas", "St Nicholas", "saint nicholas"});
  ASSERT_EQ(c.size(), 1u);
  std::sort(c[0].begin(), c[0].end());
  EXPECT_EQ(c[0], (std::vector<std::string>{"St Nicholas", "St. Nicholas"}));
}

TEST_F(Vocab, MergeRewritesEveryReference) {
  auto& store = ws->store();
  auto a = svc().add_term("material", "Silver gilt", "en", cast.alice).term_id;
  auto b = svc().add_term("material", "Silver-gilt", "en", cast.alice).term_id;
  ASSERT_NE(a, b);
  auto ref = [&](const std::string& id) { return docs::TermRef{"material", id, svc().term_label("material", id)}; };
  std::vector<std::string> docs_ids;
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, b}, std::pair{a, std::string("wood")}}) {
    auto d = store.create_entity("Object", "org-a", cast.alice);
    store.apply_field_edits(d.id,
                            {testkit::set("ObjectIdentity/BasicMaterial[1]", ref(x)),
                             testkit::set("ObjectIdentity/BasicMaterial[2]", ref(y))},
                            0, cast.alice);
    docs_ids.push_back(d.id);
  }
  auto untouched = store.create_entity("Object", "org-a", cast.alice);

  // Brute-force count of documents referencing the loser before merging.
  size_t referencing = 0;
  for (const auto& d : store.all()) {
    bool hit = false;
    for (const auto& [p, v] : d->values)
      if (auto* t = std::get_if<docs::TermRef>(&v); t && t->vocab == "material" && t->term_id == b) hit = true;
    referencing += hit;
  }
  ASSERT_EQ(referencing, 2u);

  // Merging into b touches the documents that mention a.
  auto report = curation::merge_terms(svc(), store, "material", b, {a}, cast.anna);
  EXPECT_EQ(report.touched_documents.size(), 2u);
  EXPECT_EQ(report.rewritten_references, 2u);
  // Merging b into a touches all three.
  auto c = svc().add_term("material", "Silver gilded", "en", cast.alice).term_id;
  auto report2 = curation::merge_terms(svc(), store, "material", c, {b}, cast.anna);
  EXPECT_EQ(report2.touched_documents.size(), 3u);
  EXPECT_EQ(std::find(report2.touched_documents.begin(), report2.touched_documents.end(), untouched.id),
            report2.touched_documents.end());

  for (const auto& d : store.all())
    for (const auto& [p, v] : d->values)
      if (auto* t = std::get_if<docs::TermRef>(&v)) {
        EXPECT_NE(t->term_id, a);
        EXPECT_NE(t->term_id, b);
      }
  auto vocab = *svc().vocabulary("material");
  EXPECT_TRUE(vocab.terms.at(a).deprecated);
  EXPECT_TRUE(vocab.terms.at(b).deprecated);
  EXPECT_EQ(vocab.terms.at(b).merged_into, c);
  // One revision per touched document, attributed to the curator.
  auto log = store.revision_log(docs_ids[1]);
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(log.back().actor, cast.anna.user_id);
  // Deprecated spellings no longer satisfy data entry.
  EXPECT_EQ(svc().add_term("material", "Silver-gilt", "en", cast.alice).term_id,
            svc().add_term("material", "Silver-gilt", "en", cast.alice).term_id);
}

TEST_F(Vocab, MergeEdgeCases) {
  auto x = svc().add_term("scratch", "Alpha", "en", cast.alice).term_id;
  auto y = svc().add_term("scratch", "Alfa", "en", cast.alice).term_id;
  auto report = curation::merge_terms(svc(), ws->store(), "scratch", x, {y}, cast.anna);
  EXPECT_TRUE(report.touched_documents.empty());
  EXPECT_TRUE(svc().vocabulary("scratch")->terms.at(y).deprecated);
  EXPECT_EQ(error_of([&] { curation::merge_terms(svc(), ws->store(), "scratch", x, {x}, cast.anna); }),
            Errc::invalid_merge);
  auto z = svc().add_term("scratch", "Gamma", "en", cast.alice).term_id;
  EXPECT_THROW(curation::merge_terms(svc(), ws->store(), "scratch", x, {z}, cast.alice), Error);
}

TEST_F(Vocab, TextExportImport) {
  svc().add_term("scratch", "Icon", "en", cast.alice);
  svc().add_term("scratch", "Chalice", "en", cast.alice);
  auto text = svc().export_vocabulary("scratch");
  auto lines = scriptorium::text::split(text.substr(0, text.size() - 1), '\n');
  ASSERT_EQ(lines.size(), 2u);
  for (const auto& l : lines) EXPECT_EQ(std::count(l.begin(), l.end(), '\t'), 2);
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));

  auto report = svc().import_vocabulary("scratch", "x\ten\ticon\n", cast.anna);
  EXPECT_EQ(report.created, 0u);
  EXPECT_EQ(svc().vocabulary("scratch")->terms.size(), 2u);

  try {
    svc().import_vocabulary("scratch", "a\ten\tOne\nb\ten\n", cast.anna);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::malformed_line);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  EXPECT_THROW(svc().import_vocabulary("scratch", "", cast.alice), Error);
}

TEST_F(Vocab, ExportImportExportIsAFixpoint) {
  for (const auto& id : svc().vocabulary_ids()) {
    auto once = svc().export_vocabulary(id);
    svc().import_vocabulary(id, once, cast.admin);
    EXPECT_EQ(svc().export_vocabulary(id), once) << id;
  }
  auto fresh = testkit::memory_workspace();
  auto fresh_cast = testkit::provision_cast(*fresh);
  fresh->vocabularies().define_vocabulary(Vocabulary{"scratch", "Scratch", VocabMode::dynamic, "en", {}});
  svc().add_term("scratch", "Icon", "en", cast.alice);
  svc().set_label("scratch", svc().add_term("scratch", "Icon", "en", cast.alice).term_id, "el", "Εικόνα", cast.anna);
  auto text = svc().export_vocabulary("scratch");
  fresh->vocabularies().import_vocabulary("scratch", text, fresh_cast.anna);
  EXPECT_EQ(fresh->vocabularies().export_vocabulary("scratch"), text);
}

TEST_F(Vocab, ThesaurusExamples) {
  svc().define_thesaurus(Thesaurus("demo", "Demo"));
  svc().manage_thesaurus("demo", AddConcept{concept_of("religious-object", "religious object")}, cast.anna);
  auto icon = concept_of("icon", "icon");
  icon.broader = {"religious-object"};
  svc().manage_thesaurus("demo", AddConcept{icon}, cast.anna);
  EXPECT_EQ(svc().thesaurus("demo")->narrower("religious-object"), std::set<std::string>{"icon"});
  EXPECT_EQ(error_of([&] { svc().manage_thesaurus("demo", SetBroader{"religious-object", "icon"}, cast.anna); }),
            Errc::cycle_detected);
  svc().manage_thesaurus("demo", RemoveBroader{"icon", "religious-object"}, cast.anna);
  EXPECT_TRUE(svc().thesaurus("demo")->narrower("religious-object").empty());
  EXPECT_EQ(error_of([&] { svc().manage_thesaurus("demo", SetBroader{"icon", "ghost"}, cast.anna); }),
            Errc::unknown_concept);
  EXPECT_THROW(svc().manage_thesaurus("demo", AddConcept{concept_of("x", "x")}, cast.alice), Error);
}

TEST_F(Vocab, ThesaurusStaysAcyclicUnderRandomCommands) {
  testkit::Rng rng(12);
  Thesaurus t("rand", "Random");
  std::vector<std::string> ids;
  for (int i = 0; i < 15; ++i) {
    ids.push_back("c" + std::to_string(i));
    t.add_concept(concept_of(ids.back(), ids.back()));
  }
  // Broader-reachability oracle by depth-first search over the raw relation.
  auto acyclic = [&](const Thesaurus& th) {
    for (const auto& id : ids) {
      std::vector<std::string> stack(th.find(id)->broader.begin(), th.find(id)->broader.end());
      std::set<std::string> seen;
      while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        if (cur == id) return false;
        if (!seen.insert(cur).second) continue;
        for (const auto& b : th.find(cur)->broader) stack.push_back(b);
      }
    }
    return true;
  };
  for (int step = 0; step < 2000; ++step) {
    const auto& a = ids[rng() % ids.size()];
    const auto& b = ids[rng() % ids.size()];
    try {
      if (rng() % 3) t.set_broader(a, b);
      else t.remove_broader(a, b);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::cycle_detected);
    }
    ASSERT_TRUE(acyclic(t)) << step;
    for (const auto& id : ids)
      for (const auto& n : t.narrower(id)) ASSERT_TRUE(t.find(n)->broader.count(id));
  }
}

TEST_F(Vocab, SkosExamples) {
  Thesaurus two("two", "Two");
  auto parent = concept_of("parent", "parent");
  parent.pref_labels["el"] = "γονέας";
  two.add_concept(parent);
  auto child = concept_of("child", "child");
  child.broader = {"parent"};
  two.add_concept(child);
  auto g = export_thesaurus_skos(two, "https://x.org");
  EXPECT_EQ(g.count_predicate(rdf::skos("broader")), 1u);
  EXPECT_EQ(g.count_predicate(rdf::skos("narrower")), 1u);
  auto labels = g.objects(concept_iri("https://x.org", "two", "parent"), rdf::skos("prefLabel"));
  ASSERT_EQ(labels.size(), 2u);
  std::set<std::string> langs;
  for (const auto& l : labels) langs.insert(l.language);
  EXPECT_EQ(langs, (std::set<std::string>{"el", "en"}));
  EXPECT_EQ(g.instances_of(rdf::skos("Concept")).size(), 2u);
  EXPECT_EQ(g.objects(scheme_iri("https://x.org", "two"), rdf::skos("hasTopConcept")).size(), 1u);

  auto empty = export_thesaurus_skos(Thesaurus("none", "None"), "https://x.org");
  std::set<std::string> subjects;
  for (const auto& t : empty) subjects.insert(t.subject);
  EXPECT_EQ(subjects, std::set<std::string>{scheme_iri("https://x.org", "none")});
  EXPECT_EQ(empty.instances_of(rdf::skos("ConceptScheme")).size(), 1u);
}

TEST_F(Vocab, SkosNarrowerIsTransposeOfBroader) {
  for (const auto& id : svc().thesaurus_ids()) {
    auto g = export_thesaurus_skos(*svc().thesaurus(id), ws->base_iri());
    std::set<std::pair<std::string, std::string>> broader, narrower;
    for (const auto& t : g) {
      if (t.predicate == rdf::skos("broader")) broader.insert({t.subject, t.object.value});
      if (t.predicate == rdf::skos("narrower")) narrower.insert({t.object.value, t.subject});
    }
    EXPECT_FALSE(broader.empty()) << id;
    EXPECT_EQ(broader, narrower) << id;
  }
}

TEST_F(Vocab, PersistAndReload) {
  testkit::TempDir dir;
  svc().add_term("scratch", "Icon", "en", cast.alice);
  svc().manage_thesaurus("topic", AddConcept{concept_of("exile", "exile")}, cast.anna);
  svc().save(dir.path());
  VocabularyService copy;
  copy.load(dir.path());
  EXPECT_EQ(copy.vocabulary("scratch"), svc().vocabulary("scratch"));
  EXPECT_EQ(copy.thesaurus("topic"), svc().thesaurus("topic"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "thesaurus-topic.xml"));
}

TEST_F(Vocab, SeedVocabulariesAreSeparateFromThesauri) {
  for (const auto& id : svc().thesaurus_ids()) EXPECT_FALSE(svc().vocabulary(id)) << id;
  EXPECT_TRUE(svc().term_exists("unit", "cm"));
  EXPECT_TRUE(svc().concept_exists("object-kind", "icon"));
  EXPECT_FALSE(svc().term_exists("object-kind", "icon"));
  EXPECT_EQ(svc().vocabulary_mode("unit"), VocabMode::static_);
  EXPECT_EQ(svc().vocabulary_mode("material"), VocabMode::dynamic);
}
