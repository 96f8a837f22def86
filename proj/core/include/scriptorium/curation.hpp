#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scriptorium/access.hpp"
#include "scriptorium/docs.hpp"
#include "scriptorium/vocab.hpp"

namespace scriptorium::curation {

struct CurationReport {
  std::string vocab_id;
  std::string winner;
  std::vector<std::string> losers;
  std::vector<std::string> touched_documents;  // sorted
  size_t rewritten_references = 0;
};

using Progress = std::function<void(size_t done, size_t total)>;

/// Folds `losers` into `winner`: every TermRef in the corpus that names a
/// loser is rewritten (one new revision per touched document, attributed
/// to `actor`) and the losers become deprecated tombstones.
CurationReport merge_terms(vocab::VocabularyService& vocabularies, docs::DocumentStore& store,
                           const std::string& vocab_id, const std::string& winner,
                           const std::vector<std::string>& losers, const access::User& actor,
                           const Progress& progress = {});

}  // namespace scriptorium::curation
