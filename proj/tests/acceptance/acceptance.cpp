// Acceptance run: one PASS/FAIL line per primary criterion. Exits non-zero
// when any criterion fails. Tolerances and budgets are pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "access_oracle.hpp"
#include "indicative_fields.hpp"
#include "scriptorium/chrono.hpp"
#include "scriptorium/curation.hpp"
#include "scriptorium/mapping.hpp"
#include "scriptorium/server.hpp"
#include "search_oracle.hpp"
#include "testkit.hpp"

using namespace scriptorium;
using schema::FieldPath;
using Clock = std::chrono::steady_clock;

namespace budget {
constexpr double time_grammar_s = 1.0;
constexpr double round_trips_s = 30.0;
constexpr double search_oracle_s = 60.0;
constexpr double rebuild_index_s = 10.0;
constexpr double keyword_query_ms = 500.0;
}  // namespace budget

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string ordinal(int n) {
  const int mod100 = n % 100;
  const char* suffix = (mod100 >= 11 && mod100 <= 13) ? "th" : n % 10 == 1 ? "st" : n % 10 == 2 ? "nd" : n % 10 == 3 ? "rd" : "th";
  return std::to_string(n) + suffix;
}

// ---------------------------------------------------------------------------

void schema_coverage(Check& c, std::string& note) {
  auto ws = testkit::memory_workspace();
  auto all = ws->schemas().all_latest();
  c.expect(all.size() == 19, "expected 19 seed schemas, found " + std::to_string(all.size()));
  auto catalog = testkit::catalog_of(*ws);
  for (const auto& s : all) {
    auto issues = schema::validate_schema(*s, catalog);
    c.expect(issues.empty(), s->type_name + ": " + (issues.empty() ? "" : to_string(issues[0])));
  }
  std::function<void(const schema::Node&, std::set<std::string>&)> labels_of = [&](const schema::Node& n,
                                                                                   std::set<std::string>& out) {
    std::visit(
        [&](const auto& def) {
          for (const auto& [lang, text] : def.label) out.insert(text);
          if constexpr (std::is_same_v<std::decay_t<decltype(def)>, schema::GroupDef>)
            for (const auto& child : def.children) labels_of(child, out);
        },
        n);
  };
  size_t fields = 0;
  for (const auto& [type, wanted] : testkit::indicative_fields()) {
    auto s = ws->schemas().latest(type);
    if (!s) {
      c.expect(false, "no schema for " + type);
      continue;
    }
    std::set<std::string> labels;
    for (const auto& child : s->root.children) labels_of(child, labels);
    for (const auto& f : wanted) {
      c.expect(labels.count(f) > 0, type + " lacks '" + f + "'");
      ++fields;
    }
  }
  c.expect(testkit::indicative_fields().size() == 19, "manifest does not list 19 types");
  note = std::to_string(all.size()) + " schemas, " + std::to_string(fields) + " indicative fields";
}

void time_grammar(Check& c, std::string& note) {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, chrono::TimeSpan>> reference = {
      {"decade of 1970", {1970, 1979}},
      {"ca. 1920", {1910, 1930}},
      {"1st half 4th century", {301, 350}},
      {"1500 BCE", {-1499, -1499}},
      {"3rd century - 5th century", {201, 500}},
  };
  for (const auto& [expr, want] : reference) {
    auto got = chrono::normalize(expr);
    c.expect(got == want, expr + " -> [" + std::to_string(got.earliest) + "," + std::to_string(got.latest) + "]");
  }
  // Brute-force classification of every year, compared with the century formula.
  std::map<std::pair<int, bool>, chrono::TimeSpan> seen;
  // Astronomical numbering: year 0 is 1 BCE.
  for (int y = -2100; y <= 2100; ++y) {
    const bool bce = y < 1;
    const int n = bce ? (1 - y - 1) / 100 + 1 : (y - 1) / 100 + 1;
    auto [it, fresh] = seen.try_emplace({n, bce}, chrono::TimeSpan{y, y});
    it->second.earliest = std::min(it->second.earliest, y);
    it->second.latest = std::max(it->second.latest, y);
  }
  int centuries = 0;
  for (bool bce : {false, true})
    for (int n = 1; n <= 21; ++n) {
      const auto expr = ordinal(n) + " century" + (bce ? " BCE" : "");
      c.expect(chrono::normalize(expr) == seen.at({n, bce}), expr);
      ++centuries;
    }
  const double t = seconds_since(t0);
  c.expect(t < budget::time_grammar_s, "took " + std::to_string(t) + " s");
  std::ostringstream os;
  os << "5 reference spans, " << centuries << " centuries, " << t << " s";
  note = os.str();
}

void round_trips(Check& c, std::string& note) {
  const auto t0 = Clock::now();
  auto ws = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*ws);
  std::set<schema::Kind> kinds;
  int docs_checked = 0;
  for (const auto& xml : testkit::corpus_xml(*ws, 3, 0.05)) {
    auto original = docs::entity_from_xml(xml);
    for (const auto& [p, v] : original.values) kinds.insert(docs::kind_of(v));
    docs::ImportOptions keep;
    keep.preserve_id = true;
    keep.links = docs::ImportOptions::Links::lenient;
    auto imported = ws->store().import_entity_xml(xml, "org-a", cast.alice, keep).document;
    auto again = docs::entity_from_xml(ws->store().export_entity_xml(imported.id, cast.alice));
    c.expect(imported.values == original.values && again.values == original.values, "round trip differs for " + original.id);
    ++docs_checked;
  }
  c.expect(docs_checked >= 200, "only " + std::to_string(docs_checked) + " documents");
  c.expect(kinds.size() == std::size(schema::all_kinds), "only " + std::to_string(kinds.size()) + " field kinds covered");

  testkit::Rng rng(17);
  int graphs = 0;
  for (int i = 0; i < 120; ++i) {
    auto g = testkit::random_graph(rng, 1 + rng() % 60);
    auto nt = rdf::to_ntriples(g);
    auto ttl = rdf::to_turtle(g, rdf::standard_prefixes());
    c.expect(rdf::parse_ntriples(nt) == g && rdf::parse_turtle(ttl).graph == g, "graph " + std::to_string(i));
    ++graphs;
  }
  const double t = seconds_since(t0);
  c.expect(t < budget::round_trips_s, "took " + std::to_string(t) + " s");
  std::ostringstream os;
  os << docs_checked << " documents over " << kinds.size() << " kinds, " << graphs << " graphs, " << t << " s";
  note = os.str();
}

void mapping_shape(Check& c, std::string& note) {
  auto ws = testkit::memory_workspace();
  const auto& spec = ws->mappings().at("Object");
  const std::string base = "https://scriptorium.example.org";
  const auto E16 = rdf::crm("E16_Measurement"), E54 = rdf::crm("E54_Dimension");

  auto one = testkit::measurement_object(*ws, 1);
  auto g1 = mapping::transform_entity(one, spec, base);
  auto obj = mapping::entity_iri(base, "Object", one.id);
  c.expect(g1.contains({obj, rdf::rdf("type"), rdf::Term::iri(rdf::crm("E22_Human-Made_Object"))}), "object is not E22");
  auto m = g1.instances_of(E16);
  c.expect(m.size() == 1, "one measurement gave " + std::to_string(m.size()) + " E16");
  if (m.size() == 1) {
    c.expect(g1.contains({obj, rdf::crm("P39i_was_measured_by"), rdf::Term::iri(*m.begin())}), "E22 -P39i-> E16 missing");
    auto dims = g1.objects(*m.begin(), rdf::crm("P40_observed_dimension"));
    c.expect(dims.size() == 1 && g1.instances_of(E54).count(dims.begin()->value), "E16 -P40-> E54 missing");
  }
  auto g2 = mapping::transform_entity(testkit::measurement_object(*ws, 2), spec, base);
  c.expect(g2.instances_of(E16).size() == 2, "two measurements gave " + std::to_string(g2.instances_of(E16).size()) + " E16");
  auto g3 = mapping::transform_entity(testkit::measurement_object(*ws, 3, 2), spec, base);
  c.expect(g3.instances_of(E16).size() == 3, "three measurements gave " + std::to_string(g3.instances_of(E16).size()) + " E16");

  auto fixture = testkit::measurement_object(*ws, 2, 2);
  auto other = testkit::memory_workspace();
  c.expect(rdf::to_ntriples(mapping::transform_entity(fixture, spec, base)) ==
               rdf::to_ntriples(mapping::transform_entity(fixture, other->mappings().at("Object"), base)),
           "N-Triples differ between runs");

  // Naive conservation on the same fixtures.
  std::ostringstream counts;
  for (auto [measurements, dimensions] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{3, 2}}) {
    auto doc = testkit::measurement_object(*ws, measurements, dimensions);
    auto naive = mapping::naive_export(doc, base);
    const size_t want = doc.values.size() + 1;
    counts << " " << measurements << "x" << dimensions << ":" << naive.size() << "/" << want;
    c.expect(naive.size() == want, "naive export of " + std::to_string(measurements) + "x" + std::to_string(dimensions) +
                                       " fixture has " + std::to_string(naive.size()) + " triples, filled leaves + 1 = " +
                                       std::to_string(want) +
                                       " (index-free predicates collapse repeated unit/type values in a triple set)");
  }
  note = "E22->E16->E54 chain, E16 per measurement, naive triples/expected" + counts.str();
}

/// Generated desk-scale corpus shared by the search and load criteria.
struct DeskCorpus {
  std::unique_ptr<Workspace> ws;
  testkit::Cast cast;
  size_t imported = 0;
  double import_s = 0;
};

DeskCorpus& desk() {
  static DeskCorpus d = [] {
    DeskCorpus out;
    out.ws = testkit::memory_workspace();
    out.cast = testkit::provision_cast(*out.ws);
    const auto t0 = Clock::now();
    docs::ImportOptions opts;
    opts.preserve_id = true;
    opts.links = docs::ImportOptions::Links::lenient;
    for (const auto& xml : testkit::corpus_xml(*out.ws, 2024, 1.0)) {
      out.ws->store().import_entity_xml(xml, "org-a", out.cast.alice, opts);
      ++out.imported;
    }
    out.import_s = seconds_since(t0);
    return out;
  }();
  return d;
}

void search_oracle(Check& c, std::string& note) {
  auto& d = desk();
  const auto t0 = Clock::now();
  auto& ws = *d.ws;
  auto docs = ws.store().all();
  c.expect(docs.size() >= 5000, "corpus has " + std::to_string(docs.size()) + " entities");
  std::vector<std::shared_ptr<const docs::EntityDocument>> dated;
  for (const auto& doc : docs)
    if (std::any_of(doc->values.begin(), doc->values.end(),
                    [](const auto& kv) { return std::holds_alternative<docs::TimeVal>(kv.second); }))
      dated.push_back(doc);

  testkit::Rng rng(5000);
  int queries = 0, with_dates = 0, nonempty = 0;
  while (queries < 50) {
    // Every other query is anchored on a dated document and carries a date predicate.
    const bool want_date = queries % 2 == 0;
    const auto& seed = want_date ? *dated[rng() % dated.size()] : *docs[rng() % docs.size()];
    query::Conjunction preds;
    if (want_date) {
      for (int attempt = 0; attempt < 50; ++attempt)
        if (auto p = testkit::predicate_from(seed, rng);
            p && (std::holds_alternative<query::DateWithin>(*p) || std::holds_alternative<query::DateOverlaps>(*p))) {
          preds.push_back(*p);
          break;
        }
      if (preds.empty()) continue;
    }
    for (int k = 0; k < 1 + static_cast<int>(rng() % 2); ++k)
      if (auto p = testkit::predicate_from(seed, rng)) preds.push_back(*p);
    if (preds.empty()) continue;
    const bool dates = std::any_of(preds.begin(), preds.end(), [](const query::Predicate& p) {
      return std::holds_alternative<query::DateWithin>(p) || std::holds_alternative<query::DateOverlaps>(p);
    });
    std::vector<std::string> expected;
    for (const auto& doc : docs)
      if (doc->type_name == seed.type_name &&
          std::all_of(preds.begin(), preds.end(), [&](const query::Predicate& p) { return testkit::oracle_match(*doc, p); }))
        expected.push_back(doc->id);
    std::sort(expected.begin(), expected.end());
    auto got = ws.query().advanced_search(seed.type_name, preds, d.cast.alice);
    c.expect(got == expected, "query differs: " + query::predicates_to_json(preds));
    ++queries;
    with_dates += dates;
    nonempty += !got.empty();
  }
  c.expect(with_dates >= 25, "only " + std::to_string(with_dates) + " queries use date predicates");

  // Hand-authored fixture answers.
  auto fx = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*fx);
  auto s = testkit::build_icon_scenario(*fx, cast);
  auto as_set = [](const std::vector<std::string>& v) { return std::set<std::string>(v.begin(), v.end()); };
  const auto century = chrono::normalize("18th century");
  auto donations = as_set(fx->query().advanced_search(
      "ObjectTransfer",
      {query::TermIs{FieldPath::parse("TransferPurpose"), "donation"}, query::DateWithin{FieldPath::parse("TransferDate"), century}},
      cast.alice));
  c.expect(donations == std::set<std::string>{s.t1, s.t4, s.t5}, "donation-within-18th-century answer differs");

  std::set<std::string> kinds{"icon"};
  for (const auto& k : fx->vocabularies().thesaurus("object-kind")->narrower("icon")) kinds.insert(k);
  std::set<std::string> icons;
  for (const auto& k : kinds)
    for (const auto& id : fx->query().advanced_search("Object", {query::TermIs{FieldPath::parse("ObjectIdentity/Category"), k}}, cast.alice))
      icons.insert(id);
  auto russian = as_set(fx->query().advanced_search(
      "Location", {query::TermIs{FieldPath::parse("GeopoliticalHierarchy/Country"), "russia"}}, cast.alice));
  auto greek_monasteries = as_set(fx->query().advanced_search(
      "Location",
      {query::TermIs{FieldPath::parse("GeopoliticalHierarchy/Country"), "greece"},
       query::TermIs{FieldPath::parse("LocationType"), "monastery"}},
      cast.alice));
  auto transfers = as_set(fx->query().advanced_search(
      "ObjectTransfer",
      {query::LinksTo{FieldPath::parse("TransferredObject"), icons}, query::LinksTo{FieldPath::parse("FromLocation"), russian},
       query::LinksTo{FieldPath::parse("ToLocation"), greek_monasteries}},
      cast.alice));
  auto passages = fx->query().link_targets(transfers, FieldPath::parse("BasedOn"), cast.alice);
  c.expect(passages == std::set<std::string>{s.p1, s.p2, s.p3}, "source-passage scenario answer differs");

  const double t = seconds_since(t0);
  c.expect(t < budget::search_oracle_s, "took " + std::to_string(t) + " s");
  std::ostringstream os;
  os << queries << " queries (" << with_dates << " dated, " << nonempty << " non-empty) over " << docs.size()
     << " entities, 2 fixture scenarios, " << t << " s";
  note = os.str();
}

void access_matrix(Check& c, std::string& note) {
  auto ws = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*ws);
  int cells = 0;
  for (const auto* user : {&cast.admin, &cast.anna, &cast.alice, &cast.gail})
    for (access::Action action : access::all_actions)
      for (testkit::Situation where : testkit::all_situations) {
        auto state = ws->access().snapshot();
        const std::string entity = "obj-000042";
        if (where == testkit::Situation::granted) state.grants.insert({entity, user->user_id});
        auto res = testkit::resource_for(action, where, *user, "org-a", "org-b", cast.amir.user_id, entity);
        const bool got = bool(access::authorize(*user, action, res, state));
        const bool want = testkit::expected_decision(user->role, action, where);
        c.expect(got == want, std::string(to_string(user->role)) + " " + std::string(to_string(action)) + " " +
                                  std::string(testkit::to_string(where)));
        ++cells;
      }
  c.expect(cells == 160, "matrix has " + std::to_string(cells) + " cells");
  note = std::to_string(cells) + " cells, " + std::to_string(c.failures.size()) + " deviations";
}

void versioning(Check& c, std::string& note) {
  auto ws = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*ws);
  auto& store = ws->store();
  testkit::Rng rng(21);
  testkit::LinkPicker none = [](const std::vector<std::string>&, testkit::Rng&) { return std::nullopt; };
  const std::vector<std::string> types = {"Object", "Person", "Location", "ObjectTransfer"};
  int sequences = 0;
  for (int seq = 0; seq < 100; ++seq) {
    const auto& type = types[seq % types.size()];
    auto schema = ws->schemas().require(type);
    auto d = store.create_entity(type, "org-a", cast.alice);
    int rev = store.apply_field_edits(d.id, testkit::as_edits(testkit::random_document(*schema, ws->vocabularies(), none, rng)),
                                      0, cast.alice);
    const int v = store.snapshot_version(d.id, cast.alice);
    const auto frozen = store.export_entity_xml(d.id, cast.alice);
    const int steps = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < steps; ++i) {
      std::vector<docs::Edit> edits;
      for (const auto& [p, val] : store.get(d.id).values) edits.push_back({p, std::nullopt});
      std::reverse(edits.begin(), edits.end());
      rev = store.apply_field_edits(d.id, edits, rev, cast.alice);
      rev = store.apply_field_edits(d.id, testkit::as_edits(testkit::random_document(*schema, ws->vocabularies(), none, rng)),
                                    rev, cast.alice);
    }
    auto record = store.get_version(d.id, v);
    c.expect(record.xml == frozen && docs::entity_to_xml(record.snapshot, schema.get()) == frozen,
             "version " + std::to_string(v) + " of " + d.id + " changed");
    ++sequences;
  }
  note = std::to_string(sequences) + " edit sequences";
}

void vocabulary(Check& c, std::string& note) {
  auto ws = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*ws);
  auto& vocab = ws->vocabularies();
  testkit::Rng rng(4);
  const std::vector<std::string> bases = {"Gold leaf", "Θεοτόκος", "Straße", "Silver  gilt", "Egg tempera"};
  auto variant = [&](const std::string& s) {
    std::string out(rng() % 3, ' ');
    for (char ch : s) {
      if (ch == ' ' && rng() % 2) out += "  ";
      else out += (rng() % 2 && ch >= 'a' && ch <= 'z') ? char(ch - 32) : ch;
    }
    return out + std::string(rng() % 3, ' ');
  };
  const auto before = vocab.vocabulary("material")->terms.size();
  std::map<std::string, std::string> ids;
  size_t created = 0;
  for (int i = 0; i < 300; ++i) {
    const auto& base = bases[rng() % bases.size()];
    auto r = vocab.add_term("material", variant(base), "en", cast.alice);
    auto [it, fresh] = ids.try_emplace(base, r.term_id);
    // Only the first spelling of a label may create a term; seeded labels never do.
    c.expect((fresh || !r.created) && it->second == r.term_id, "add_term not idempotent for '" + base + "'");
    created += r.created;
  }
  c.expect(vocab.vocabulary("material")->terms.size() == before + created, "unexpected number of material terms");

  // Merge, then scan the whole corpus for loser references.
  testkit::build_corpus(*ws, cast.alice, "org-a", 77, 0.05);
  const auto winner = ids.at("Silver  gilt");
  const auto loser = vocab.add_term("material", "Silver-gilded", "en", cast.alice).term_id;
  int planted = 0;
  for (const auto& doc : ws->store().all()) {
    if (doc->type_name != "Object" || planted >= 20) continue;
    ws->store().apply_field_edits(
        doc->id, {testkit::set("ObjectIdentity/BasicMaterial[1]", docs::TermRef{"material", loser, "Silver-gilded"})},
        doc->revision, cast.alice);
    ++planted;
  }
  auto report = curation::merge_terms(vocab, ws->store(), "material", winner, {loser}, cast.anna);
  size_t left = 0;
  for (const auto& doc : ws->store().all())
    for (const auto& [p, v] : doc->values)
      if (const auto* t = std::get_if<docs::TermRef>(&v); t && t->vocab == "material" && t->term_id == loser) ++left;
  c.expect(left == 0, std::to_string(left) + " loser references remain");
  c.expect(report.touched_documents.size() == static_cast<size_t>(planted), "merge touched an unexpected document count");

  size_t edges = 0;
  for (const auto& id : vocab.thesaurus_ids()) {
    auto g = vocab::export_thesaurus_skos(*vocab.thesaurus(id), ws->base_iri());
    std::set<std::pair<std::string, std::string>> broader, narrower;
    for (const auto& t : g) {
      if (t.predicate == rdf::skos("broader")) broader.insert({t.subject, t.object.value});
      if (t.predicate == rdf::skos("narrower")) narrower.insert({t.object.value, t.subject});
    }
    c.expect(!broader.empty() && broader == narrower, "SKOS narrower is not the transpose of broader in " + id);
    edges += broader.size();
  }
  note = "300 add_term calls, " + std::to_string(planted) + " documents merged, " + std::to_string(edges) + " SKOS edges";
}

void desk_scale(Check& c, std::string& note) {
  auto& d = desk();
  auto& ws = *d.ws;
  c.expect(d.imported >= 5000, "imported " + std::to_string(d.imported) + " entities");
  const auto& counts = testkit::desk_counts();
  std::map<std::string, size_t> by_type;
  for (const auto& doc : ws.store().all()) ++by_type[doc->type_name];
  c.expect(by_type["Object"] == static_cast<size_t>(counts.at("Object")), "object count differs");
  c.expect(by_type["ObjectTransfer"] == static_cast<size_t>(counts.at("ObjectTransfer")), "transfer count differs");

  const auto t0 = Clock::now();
  auto stats = ws.query().rebuild_index();
  const double rebuild = seconds_since(t0);
  c.expect(rebuild < budget::rebuild_index_s, "rebuild-index took " + std::to_string(rebuild) + " s");
  c.expect(stats.entities == ws.store().size(), "index covers " + std::to_string(stats.entities) + " entities");

  double worst_ms = 0;
  size_t hits = 0;
  const std::vector<std::string> probes = {"icon", "monastery", "silver", "nicholas", "athos", "letter",
                                           "a",    "the",       "gold",   "donation", "moscow icon", "zzzz"};
  for (const auto& q : probes) {
    const auto q0 = Clock::now();
    hits += ws.query().keyword_search(q, std::nullopt, d.cast.alice).size();
    worst_ms = std::max(worst_ms, seconds_since(q0) * 1000);
  }
  c.expect(worst_ms < budget::keyword_query_ms, "slowest keyword query " + std::to_string(worst_ms) + " ms");
  std::ostringstream os;
  os << d.imported << " entities imported in " << d.import_s << " s, rebuild-index " << rebuild << " s, slowest of "
     << probes.size() << " keyword queries " << worst_ms << " ms";
  note = os.str();
}

void headless(Check& c, std::string& note) {
  // The HTTP interface the browser client would use answers on its own.
  auto ws = testkit::memory_workspace();
  auto cast = testkit::provision_cast(*ws);
  auto s = testkit::build_icon_scenario(*ws, cast);
  api::Server server(*ws);
  const int port = server.start_background();
  httplib::Client client("127.0.0.1", port);
  auto login = client.Post("/api/v1/login",
                           nlohmann::json{{"user", cast.alice.user_id}, {"password", cast.secrets.at(cast.alice.user_id)}}.dump(),
                           "application/json");
  c.expect(login && login->status == 200, "login failed");
  if (login && login->status == 200) {
    httplib::Headers auth{{"Authorization", "Bearer " + nlohmann::json::parse(login->body)["token"].get<std::string>()}};
    auto body = nlohmann::json::parse(query::predicates_to_json({query::TermIs{FieldPath::parse("TransferPurpose"), "donation"},
                                                                     query::DateWithin{FieldPath::parse("TransferDate"),
                                                                                       chrono::normalize("18th century")}}));
    auto res = client.Post("/api/v1/ObjectTransfer/query", auth, body.dump(), "application/json");
    c.expect(res && res->status == 200, "predicate query over HTTP failed");
    if (res && res->status == 200) {
      auto ids = nlohmann::json::parse(res->body)["ids"].get<std::vector<std::string>>();
      c.expect(std::set<std::string>(ids.begin(), ids.end()) == std::set<std::string>{s.t1, s.t4, s.t5},
               "HTTP query answer differs");
    }
    auto map = client.Get("/api/v1/map?ids=" + s.t1, auth);
    c.expect(map && map->status == 200, "map endpoint failed");
  }
  server.stop();
  note = "all criteria run in-process against core and /api/v1; no browser client built";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Check&, std::string&);
  };
  const Criterion criteria[] = {
      {"schema-coverage", schema_coverage}, {"time-grammar", time_grammar},   {"round-trips", round_trips},
      {"mapping-shape", mapping_shape},     {"search-oracle", search_oracle}, {"access-matrix", access_matrix},
      {"versioning", versioning},           {"vocabulary", vocabulary},       {"desk-scale-load", desk_scale},
      {"headless", headless},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    std::string note;
    try {
      cr.run(check, note);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", cr.name, note.c_str());
    for (size_t i = 0; i < check.failures.size() && i < 5; ++i) std::printf("    - %s\n", check.failures[i].c_str());
    if (check.failures.size() > 5) std::printf("    - ... %zu more\n", check.failures.size() - 5);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
