#include <benchmark/benchmark.h>

#include "scriptorium/chrono.hpp"
#include "scriptorium/query.hpp"
#include "testkit.hpp"

using namespace scriptorium;

namespace {

// One desk-scale corpus per process; building it dominates startup.
struct Desk {
  std::unique_ptr<Workspace> ws = testkit::memory_workspace();
  testkit::Cast cast = testkit::provision_cast(*ws);
  Desk() {
    docs::ImportOptions opts;
    opts.preserve_id = true;
    opts.links = docs::ImportOptions::Links::lenient;
    for (const auto& xml : testkit::corpus_xml(*ws, 2024, 1.0)) ws->store().import_entity_xml(xml, "org-a", cast.alice, opts);
  }
};

Desk& desk() {
  static Desk d;
  return d;
}

void BM_RebuildIndex(benchmark::State& state) {
  auto& d = desk();
  for (auto _ : state) benchmark::DoNotOptimize(d.ws->query().rebuild_index());
  state.counters["entities"] = static_cast<double>(d.ws->store().size());
}
BENCHMARK(BM_RebuildIndex)->Unit(benchmark::kMillisecond);

void BM_KeywordSearch(benchmark::State& state) {
  auto& d = desk();
  const std::vector<std::string> probes = {"icon", "monastery silver", "a", "nicholas", "zzzz"};
  size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.ws->query().keyword_search(probes[i++ % probes.size()], std::nullopt, d.cast.alice));
}
BENCHMARK(BM_KeywordSearch)->Unit(benchmark::kMicrosecond);

void BM_AdvancedSearchDates(benchmark::State& state) {
  auto& d = desk();
  query::Conjunction preds{query::DateOverlaps{schema::FieldPath::parse("TransferDate"), chrono::normalize("18th century")}};
  for (auto _ : state) benchmark::DoNotOptimize(d.ws->query().advanced_search("ObjectTransfer", preds, d.cast.alice));
}
BENCHMARK(BM_AdvancedSearchDates)->Unit(benchmark::kMicrosecond);

void BM_FilterRows(benchmark::State& state) {
  auto& d = desk();
  for (auto _ : state) benchmark::DoNotOptimize(d.ws->query().filter_rows("Object", "ic", d.cast.alice));
}
BENCHMARK(BM_FilterRows)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
