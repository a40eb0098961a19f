#include <benchmark/benchmark.h>

#include "chordgram/evaluation.hpp"
#include "chordgram/ranking.hpp"
#include "chordgram/skipgram.hpp"
#include "chordgram/synth.hpp"

using namespace chordgram;

namespace {

EncodedSequence long_sequence(int length) {
  SynthParams params;
  params.pieces = 1;
  params.slices_per_piece = length;
  params.plant_rate = 0.0;
  params.palette_size = 8;
  const Corpus corpus = generate_corpus(params);
  return encode_sequence(full_expand(corpus.pieces[0]));
}

Corpus bench_corpus(int pieces, int slices) {
  SynthParams params;
  params.pieces = pieces;
  params.slices_per_piece = slices;
  params.plant_rate = 0.7;
  return plant_pattern(generate_corpus(params), cadence_pitch_sets(), params);
}

void EnumerateFixed(benchmark::State& state) {
  const EncodedSequence seq = long_sequence(static_cast<int>(state.range(0)));
  std::uint64_t instances = 0;
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_fixed(seq, 4, 3,
                   [&](std::span<const std::uint32_t>, const NGramType&) {
                     ++count;
                   });
    benchmark::DoNotOptimize(count);
    instances = count;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(instances) *
                          state.iterations());
}
BENCHMARK(EnumerateFixed)->Arg(100)->Arg(500)->Arg(2000);

void EnumerateVariable(benchmark::State& state) {
  const EncodedSequence seq = long_sequence(static_cast<int>(state.range(0)));
  std::uint64_t instances = 0;
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_variable(seq, 4, 2.0, WindowScope::kPair,
                      [&](std::span<const std::uint32_t>, const NGramType&) {
                        ++count;
                      });
    benchmark::DoNotOptimize(count);
    instances = count;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(instances) *
                          state.iterations());
}
BENCHMARK(EnumerateVariable)->Arg(100)->Arg(500)->Arg(2000);

void AccumulateCorpus(benchmark::State& state) {
  const Corpus corpus = bench_corpus(static_cast<int>(state.range(0)), 60);
  const auto seqs = encode_corpus(corpus, false);
  SelectionConfig sel;
  sel.n = 4;
  sel.mode = SelectionMode::kFixed;
  sel.max_skip = 3;
  WeightScheme weighting;
  weighting.kind = WeightKind::kPeriodicity;
  for (auto _ : state) {
    const Distribution d = accumulate(seqs, sel, weighting, false);
    benchmark::DoNotOptimize(d.joint.size());
  }
}
BENCHMARK(AccumulateCorpus)->Arg(10)->Arg(50);

void RankTableBuild(benchmark::State& state) {
  const Corpus corpus = bench_corpus(50, 60);
  const auto seqs = encode_corpus(corpus, false);
  SelectionConfig sel;
  sel.n = 4;
  sel.mode = SelectionMode::kFixed;
  sel.max_skip = 3;
  WeightScheme weighting;
  weighting.kind = WeightKind::kPeriodicity;
  const Distribution d = accumulate(seqs, sel, weighting, false);
  for (auto _ : state) {
    const RankTable table = build_rank_table(d, Measure::kPwpmi);
    benchmark::DoNotOptimize(table.rows.size());
  }
}
BENCHMARK(RankTableBuild);

}  // namespace

BENCHMARK_MAIN();
