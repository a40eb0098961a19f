#ifndef CHORDGRAM_EVALUATION_HPP
#define CHORDGRAM_EVALUATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chordgram/corpus.hpp"
#include "chordgram/ranking.hpp"

namespace chordgram {

struct ModelConfig {
  SelectionConfig selection;
  WeightScheme weighting;
  Measure measure = Measure::kPwpmi;
  bool merge_repeats = false;
  int folds = 10;  // 1 = single whole-corpus run
  std::uint64_t seed = 0;
  int threads = 1;
};

struct FoldResult {
  int fold = 0;
  std::optional<std::size_t> rank;
  double rr = 0.0;
};

struct EvalResult {
  ModelConfig config;
  std::optional<std::size_t> rank;  // over the whole corpus
  double rr = 0.0;
  std::vector<FoldResult> per_fold;
  double mrr = 0.0;  // mean of per-fold reciprocal ranks
  std::size_t table_size = 0;
};

/// 1/rank, or 0 when the target is absent. Throws on rank < 1.
double reciprocal_rank(std::optional<std::size_t> rank);

/// Shared preprocessing: full expansion (optionally merging repeated
/// sonorities) followed by chord-type encoding, per piece.
std::vector<EncodedSequence> encode_corpus(const Corpus& corpus,
                                           bool merge_repeats);

/// Ranks `target` over the whole corpus and, when folds > 1, over a seeded
/// K-fold partition of the pieces (SplitMix64 Fisher-Yates shuffle,
/// round-robin assignment). A fold where the target is absent scores 0.
/// Capability mismatches (e.g. variable selection without performance
/// times) are reported before any work.
EvalResult evaluate(const Corpus& corpus, const ModelConfig& config,
                    const NGramType& target);

// ---------------------------------------------------------------------------
// Configuration sweep
// ---------------------------------------------------------------------------

struct SweepGrid {
  std::vector<SelectionConfig> selections;
  std::vector<WeightScheme> weightings;
  std::vector<Measure> measures;

  /// fixed 0..4 and variable 0.5/1/1.5/2 crossed with all four weightings
  /// and all five measures: 180 cells.
  static SweepGrid defaults(int n);
};

struct SweepCell {
  SelectionConfig selection;
  WeightScheme weighting;
  Measure measure = Measure::kCount;
  int folds = 1;
  std::optional<std::size_t> rank_full;
  double rr_full = 0.0;
  double mrr = 0.0;
  std::size_t table_size = 0;
  std::string status = "ok";  // or "skipped: <reason>"
  std::vector<RankRow> top;   // populated when top_n > 0
  std::size_t ordinal = 0;    // position in the grid cross product
};

struct SweepReport {
  int n = 2;
  int folds = 1;
  std::uint64_t seed = 0;
  std::string rng = "splitmix64";
  bool merge_repeats = false;
  std::vector<SweepCell> cells;  // sorted by mrr desc, then grid order
};

/// One evaluation per grid cell. Enumeration is shared across the five
/// measures of each (selection, weighting) pair; cells that need
/// capabilities the corpus lacks are flagged as skipped, never aborted.
/// Output is deterministic and independent of `threads`.
SweepReport sweep(const Corpus& corpus, const SweepGrid& grid, int folds,
                  std::uint64_t seed, const NGramType& target,
                  bool merge_repeats = false, int threads = 1,
                  std::size_t top_n = 0);

// selection,param,weighting,measure,k_folds,rank_full,rr_full,mrr,
// table_size,status
void write_sweep_csv(const SweepReport& report, std::ostream& out);
void write_sweep_json(const SweepReport& report, std::ostream& out);
void write_eval_json(const EvalResult& result, std::ostream& out);

}  // namespace chordgram

#endif  // CHORDGRAM_EVALUATION_HPP
