#pragma once

// Fixtures shared by the unit suites, the acceptance binary and the
// benchmarks: seeded workspaces, a standard cast of principals and random
// generators for documents, graphs and desk-scale corpora.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "scriptorium/access.hpp"
#include "scriptorium/docs.hpp"
#include "scriptorium/rdf.hpp"
#include "scriptorium/workspace.hpp"

namespace scriptorium::testkit {

using Rng = std::mt19937_64;

std::filesystem::path share_dir();

/// In-memory workspace over the shipped seed data.
std::unique_ptr<Workspace> memory_workspace();

/// What the workspace's schemas may refer to.
schema::Catalog catalog_of(Workspace& ws);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "scriptorium");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Two organisations and one principal per role and situation.
struct Cast {
  access::User admin;      // system administrator
  access::User anna;       // org-admin, org-a
  access::User alice;      // editor, org-a
  access::User amir;       // editor, org-a
  access::User gail;       // guest, org-a
  access::User bella;      // org-admin, org-b
  access::User bob;        // editor, org-b
  std::map<std::string, std::string> secrets;  // user id -> password
};

Cast provision_cast(Workspace& ws);

/// Picks a link target for a field: (type, id) among the allowed types, or
/// nothing when no candidate exists yet.
using LinkPicker = std::function<std::optional<docs::EntityLink>(const std::vector<std::string>& targets, Rng&)>;

struct GenOptions {
  double fill = 0.6;      // chance an optional node is filled
  int max_repeats = 3;    // instances of a multiple node
  bool all_kinds = true;  // force at least one value of every kind the schema has
};

/// A document whose values satisfy the schema and the seeded vocabularies.
docs::EntityDocument random_document(const schema::EntityTypeSchema& schema, const vocab::VocabularyService& vocab,
                                     const LinkPicker& links, Rng& rng, const GenOptions& options = {});

/// Edits that reproduce `doc` on an empty document.
std::vector<docs::Edit> as_edits(const docs::EntityDocument& doc);

/// Random time expression in the standard grammar.
std::string random_time_expression(Rng& rng);
/// Random text with markup-significant characters and non-ASCII letters.
std::string random_text(Rng& rng, int words);

rdf::Graph random_graph(Rng& rng, size_t triples);

/// Per-type entity counts of the reference deployment.
const std::map<std::string, int>& desk_counts();

struct Corpus {
  std::map<std::string, std::vector<std::string>> ids_by_type;
  size_t size() const;
};

/// Creates documents through the store (create + edit) in an order that
/// lets links point at earlier entities. `scale` multiplies desk_counts().
Corpus build_corpus(Workspace& ws, const access::User& actor, const std::string& org, std::uint64_t seed,
                    double scale = 1.0, const GenOptions& options = {});

/// Generates the same kind of corpus as interchange XML with preserved ids,
/// in dependency order, ready for import.
std::vector<std::string> corpus_xml(Workspace& ws, std::uint64_t seed, double scale = 1.0,
                                    const GenOptions& options = {});

/// Object with a code, a name and `measurements` measurements of
/// `dimensions` dimensions each (height/width/depth, cm). Not stored.
docs::EntityDocument measurement_object(Workspace& ws, int measurements, int dimensions = 1);

/// Hand-built icon-transfer fixture: locations, objects, source passages
/// and six transfers, all created by alice in org-a.
struct IconScenario {
  std::string moscow, kiev_lavra, athos, patmos, athens;
  std::string icon1, icon2, chalice, icon3;
  std::string p1, p2, p3, p4;
  std::string t1, t2, t3, t4, t5, t6;
};
IconScenario build_icon_scenario(Workspace& ws, const Cast& cast);

/// Convenience setters.
docs::FieldValue text(std::string s);
docs::FieldValue term(Workspace& ws, const std::string& vocab, const std::string& term_id);
docs::FieldValue link(const std::string& type, const std::string& id, std::string label = {});
docs::FieldValue when(const std::string& expr);
docs::Edit set(const std::string& path, docs::FieldValue v);

}  // namespace scriptorium::testkit
