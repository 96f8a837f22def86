#include <benchmark/benchmark.h>

#include "scriptorium/chrono.hpp"
#include "scriptorium/mapping.hpp"
#include "testkit.hpp"

using namespace scriptorium;

namespace {

const std::string kBase = "https://scriptorium.example.org";

void BM_TransformMeasurements(benchmark::State& state) {
  auto ws = testkit::memory_workspace();
  auto doc = testkit::measurement_object(*ws, static_cast<int>(state.range(0)), 3);
  const auto& spec = ws->mappings().at("Object");
  for (auto _ : state) benchmark::DoNotOptimize(mapping::transform_entity(doc, spec, kBase));
}
BENCHMARK(BM_TransformMeasurements)->Arg(1)->Arg(8)->Arg(64);

void BM_TransformRandomObjects(benchmark::State& state) {
  auto ws = testkit::memory_workspace();
  testkit::Rng rng(3);
  testkit::LinkPicker links = [](const std::vector<std::string>& t, testkit::Rng& r) {
    return std::optional<docs::EntityLink>(docs::EntityLink{t.front(), "x-" + std::to_string(r() % 9), "x"});
  };
  auto schema = ws->schemas().require("Object");
  std::vector<docs::EntityDocument> docs;
  for (int i = 0; i < 64; ++i) {
    docs.push_back(testkit::random_document(*schema, ws->vocabularies(), links, rng));
    docs.back().id = "obj-" + std::to_string(100000 + i);
  }
  const auto& spec = ws->mappings().at("Object");
  size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mapping::transform_entity(docs[i++ % docs.size()], spec, kBase));
}
BENCHMARK(BM_TransformRandomObjects);

void BM_NaiveExport(benchmark::State& state) {
  auto ws = testkit::memory_workspace();
  auto doc = testkit::measurement_object(*ws, 8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mapping::naive_export(doc, kBase));
}
BENCHMARK(BM_NaiveExport);

void BM_CanonicalNTriples(benchmark::State& state) {
  testkit::Rng rng(11);
  auto g = testkit::random_graph(rng, static_cast<size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rdf::to_ntriples(g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CanonicalNTriples)->Arg(100)->Arg(10000);

void BM_NormalizeTime(benchmark::State& state) {
  const std::vector<std::string> exprs = {"decade of 1970", "ca. 1920", "1st half 4th century", "1500 BCE",
                                          "3rd century - 5th century"};
  size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(chrono::normalize(exprs[i++ % exprs.size()]));
}
BENCHMARK(BM_NormalizeTime);

}  // namespace

BENCHMARK_MAIN();
