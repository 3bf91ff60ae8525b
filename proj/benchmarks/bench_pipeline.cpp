#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/indicators.hpp"
#include "fieldnorm/report.hpp"
#include "fieldnorm/simulate.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

using namespace fieldnorm;

namespace {

// Synthetic universe of `papers` papers over 10 fields; `general_share` of
// them sit in a general journal and cite 5-20 specialist journals.
struct Universe {
  Corpus corpus;
  CategoryMap map;
};

Universe make_universe(std::size_t papers, double general_share = 0.1) {
  sim::SimConfig config;
  config.n_fields = 10;
  config.field_rate_spread = 5;
  config.papers_per_field = papers / 10;
  config.n_groups = 1;
  sim::World world = sim::generate_corpus(config);

  Universe u;
  u.map = world.map;
  u.map.add("J-GENERAL", JournalKind::General, {});
  std::vector<Publication> pubs(world.corpus.publications().begin(), world.corpus.publications().end());
  std::mt19937_64 rng(1);
  std::bernoulli_distribution general(general_share);
  for (auto& p : pubs) {
    if (!general(rng)) continue;
    p.journal_id = "J-GENERAL";
    const std::size_t refs = 5 + rng() % 16;
    for (std::size_t r = 0; r < refs; ++r) p.cited_journals.push_back("J-F0" + std::to_string(rng() % 10));
  }
  u.corpus = freeze(Corpus(std::move(pubs), {}));
  return u;
}

void BM_Classify(benchmark::State& state) {
  const Universe u = make_universe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_corpus(u.corpus, u.map, {}, static_cast<unsigned>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Classify)->Args({10000, 1})->Args({10000, 4})->Args({100000, 4})->Unit(benchmark::kMillisecond);

void BM_BuildBaselines(benchmark::State& state) {
  const Universe u = make_universe(static_cast<std::size_t>(state.range(0)));
  const Classification c = classify_corpus(u.corpus, u.map, {});
  for (auto _ : state) benchmark::DoNotOptimize(build_baselines(u.corpus, c.assignments));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildBaselines)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const Universe u = make_universe(10000);
  const Classification c = classify_corpus(u.corpus, u.map, {});
  const BaselineTable table = build_baselines(u.corpus, c.assignments);
  Oeuvre oeuvre{"G", {}};
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i)
    oeuvre.publication_ids.push_back(u.corpus.publications()[i * 7 % u.corpus.size()].id);
  std::sort(oeuvre.publication_ids.begin(), oeuvre.publication_ids.end());
  oeuvre.publication_ids.erase(std::unique(oeuvre.publication_ids.begin(), oeuvre.publication_ids.end()),
                               oeuvre.publication_ids.end());
  const ScoringInputs in{u.corpus, c.assignments, table};
  for (auto _ : state) benchmark::DoNotOptimize(score(oeuvre, in));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Score)->Arg(30)->Arg(1000)->Arg(10000);

void BM_RenderAndVerify(benchmark::State& state) {
  const Universe u = make_universe(10000);
  const Classification c = classify_corpus(u.corpus, u.map, {});
  const BaselineTable table = build_baselines(u.corpus, c.assignments);
  Oeuvre oeuvre{"G", {}};
  for (std::size_t i = 0; i < 50; ++i) oeuvre.publication_ids.push_back(u.corpus.publications()[i * 97].id);
  std::sort(oeuvre.publication_ids.begin(), oeuvre.publication_ids.end());
  const OeuvreScore s = score(oeuvre, {u.corpus, c.assignments, table});
  ReportMeta meta;
  meta.summary = summarize_corpus(u.corpus, c, table);
  const ReportBundle bundle = render(s, meta);
  for (auto _ : state) benchmark::DoNotOptimize(verify_bundle(bundle, u.corpus, u.map, table));
}
BENCHMARK(BM_RenderAndVerify)->Unit(benchmark::kMillisecond);

void BM_DivergenceReplicate(benchmark::State& state) {
  sim::SimConfig config;
  config.n_fields = 5;
  config.field_rate_spread = 9;
  config.papers_per_field = 1000;
  config.replicates = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_divergence(config));
}
BENCHMARK(BM_DivergenceReplicate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
