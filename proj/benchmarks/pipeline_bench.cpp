#include <benchmark/benchmark.h>

#include <random>

#include "generators.hpp"
#include "yw/annotation.hpp"
#include "yw/comment_lexer.hpp"
#include "yw/model.hpp"
#include "yw/query.hpp"
#include "yw/render.hpp"
#include "yw/validate.hpp"

namespace {

yw::Block tree(benchmark::State& state) {
  std::mt19937 rng(7);
  yw::testing::GenOptions o;
  o.max_blocks = static_cast<int>(state.range(0));
  o.name_pool = 2 + o.max_blocks / 3;
  return yw::testing::random_tree(rng, o);
}

void BM_ParseSource(benchmark::State& state) {
  const auto script = yw::testing::script_for(tree(state), "python");
  const auto& syntax = yw::syntax_for("python");
  for (auto _ : state) {
    benchmark::DoNotOptimize(yw::parse_source(script, syntax, "bench.py"));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * script.size()));
}

void BM_BuildModel(benchmark::State& state) {
  const auto anns = yw::testing::annotations_for(tree(state), "bench.py");
  for (auto _ : state) benchmark::DoNotOptimize(yw::build_model(anns));
}

void BM_Validate(benchmark::State& state) {
  const auto script = yw::testing::script_for(tree(state), "python");
  const auto& syntax = yw::syntax_for("python");
  const auto anns = yw::parse_source(script, syntax, "bench.py");
  const std::vector<yw::SourceText> sources{{"bench.py", script, &syntax}};
  for (auto _ : state) benchmark::DoNotOptimize(yw::validate_annotations(anns, sources));
}

void BM_RenderCombinedNested(benchmark::State& state) {
  const auto m = yw::build_model(yw::testing::annotations_for(tree(state), "bench.py"));
  yw::RenderOptions o;
  o.view = yw::GraphView::Combined;
  o.nested = true;
  for (auto _ : state) benchmark::DoNotOptimize(yw::render(m, o));
}

void BM_DownstreamAllBlocks(benchmark::State& state) {
  const auto m = yw::build_model(yw::testing::annotations_for(tree(state), "bench.py"));
  const auto blocks = yw::list_blocks(m);
  for (auto _ : state) {
    for (const auto& b : blocks) {
      benchmark::DoNotOptimize(yw::downstream_blocks(m, b.qualified_name));
    }
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * blocks.size()));
}

void BM_ModelRoundTrip(benchmark::State& state) {
  const auto m = yw::build_model(yw::testing::annotations_for(tree(state), "bench.py"));
  for (auto _ : state) benchmark::DoNotOptimize(yw::parse_model(yw::serialize_model(m)));
}

}  // namespace

BENCHMARK(BM_ParseSource)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK(BM_BuildModel)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK(BM_Validate)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK(BM_RenderCombinedNested)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK(BM_DownstreamAllBlocks)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK(BM_ModelRoundTrip)->Arg(8)->Arg(50)->Arg(400);
BENCHMARK_MAIN();
