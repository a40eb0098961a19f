#ifndef CHORDGRAM_SYNTH_HPP
#define CHORDGRAM_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "chordgram/corpus.hpp"
#include "chordgram/ranking.hpp"

namespace chordgram {

/// Parameters of the seeded synthetic testbed. Noise sonorities are random
/// pitch sets; with palette_size > 0 each piece draws a small chord palette
/// and repeats chords from it, which is what gives within-piece repetition
/// without cross-piece conventions.
struct SynthParams {
  int pieces = 50;
  int slices_per_piece = 40;   // >= 4
  double plant_rate = 0.7;     // fraction of pieces receiving the target
  double base_ioi = 0.5;       // seconds per beat in performance time
  double timing_jitter = 0.02; // std dev of perf-onset jitter, seconds
  int pitch_low = 48;
  int pitch_range = 24;        // pitches drawn from [pitch_low, pitch_low+range]
  int chord_size = 3;
  int palette_size = 3;        // 0 = fresh random chord per slice
  std::uint64_t seed = 42;
};

/// Seeded random corpus: one sonority per beat, score onsets on the integer
/// beat grid, performance onsets at beat * base_ioi plus jitter. Jitter
/// draws that would break strict onset ordering are redrawn. Byte-identical
/// across runs with an equal seed.
Corpus generate_corpus(const SynthParams& params);

/// The default concrete pitch realization whose encoding is the built-in
/// cadence target.
const std::vector<std::vector<int>>& cadence_pitch_sets();

/// Replaces the final slices of the selected pieces (the first
/// ceil(plant_rate * pieces) of them) with the given sonorities, transposed
/// by a seeded random amount per piece; score and performance onsets of the
/// replaced region are kept, and earlier notes that would sustain into it
/// are clipped. Throws if a selected piece has fewer distinct onsets than
/// the pattern length.
Corpus plant_pattern(const Corpus& corpus,
                     const std::vector<std::vector<int>>& target_pitches,
                     const SynthParams& params);

/// Brute-force reference distribution: filters every C(L, n) index tuple
/// against the selection constraint and recomputes weights from the raw
/// formulas. Intended for desk-scale corpora.
Distribution oracle_distribution(const Corpus& corpus,
                                 const SelectionConfig& sel,
                                 const WeightScheme& weighting,
                                 bool merge_repeats = false);

}  // namespace chordgram

#endif  // CHORDGRAM_SYNTH_HPP
