#include "scriptorium/curation.hpp"

#include <algorithm>
#include <set>

#include "scriptorium/error.hpp"

namespace scriptorium::curation {

CurationReport merge_terms(vocab::VocabularyService& vocabularies, docs::DocumentStore& store,
                           const std::string& vocab_id, const std::string& winner,
                           const std::vector<std::string>& losers, const access::User& actor,
                           const Progress& progress) {
  auto d = access::authorize(actor, access::Action::manage_vocab, access::Resource::global(), {});
  if (!d) throw Error(Errc::permission_denied, "manage-vocab required: " + d.reason);

  auto vocabulary = vocabularies.vocabulary(vocab_id);
  if (!vocabulary) throw Error(Errc::unknown_vocabulary, "no vocabulary '" + vocab_id + "'");
  if (losers.empty()) throw Error(Errc::invalid_merge, "nothing to merge");
  const std::set<std::string> loser_set(losers.begin(), losers.end());
  if (loser_set.size() != losers.size()) throw Error(Errc::invalid_merge, "losers repeat");
  if (loser_set.count(winner)) throw Error(Errc::invalid_merge, "winner '" + winner + "' is among the losers");
  const auto* w = vocabulary->find(winner);
  if (w == nullptr) throw Error(Errc::unknown_term, "no term '" + winner + "' in '" + vocab_id + "'");
  if (w->deprecated) throw Error(Errc::invalid_merge, "winner '" + winner + "' is deprecated");
  for (const auto& l : losers)
    if (vocabulary->find(l) == nullptr) throw Error(Errc::unknown_term, "no term '" + l + "' in '" + vocab_id + "'");

  const auto winner_label = vocabulary->label_of(winner);
  CurationReport report{vocab_id, winner, losers, {}, 0};

  auto docs = store.all();
  size_t done = 0;
  for (const auto& doc : docs) {
    size_t rewritten = 0;
    const bool touched = store.rewrite(
        doc->id,
        [&](docs::EntityDocument& live) {
          rewritten = 0;
          for (auto& [path, value] : live.values) {
            auto* t = std::get_if<docs::TermRef>(&value);
            if (t == nullptr || t->vocab != vocab_id || !loser_set.count(t->term_id)) continue;
            t->term_id = winner;
            t->label = winner_label;
            ++rewritten;
          }
          return rewritten > 0;
        },
        actor);
    if (touched) {
      report.touched_documents.push_back(doc->id);
      report.rewritten_references += rewritten;
    }
    if (progress) progress(++done, docs.size());
  }
  std::sort(report.touched_documents.begin(), report.touched_documents.end());
  vocabularies.deprecate_into(vocab_id, winner, losers);
  return report;
}

}  // namespace scriptorium::curation
