#ifndef CHORDGRAM_EXPANSION_HPP
#define CHORDGRAM_EXPANSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "chordgram/corpus.hpp"

namespace chordgram {

/// Vertical sonority at one unique score onset. Pitches are a deduplicated,
/// sorted set; the performance onset is the earliest attack at that score
/// onset.
struct Slice {
  Beat onset_score{0};
  std::optional<double> onset_perf;
  std::vector<int> pitches;  // sorted, unique, nonempty

  bool operator==(const Slice&) const = default;
};

struct SliceSequence {
  std::string piece_id;
  std::vector<Slice> slices;  // strictly increasing onset_score

  bool has_performance() const {
    return !slices.empty() && slices.front().onset_perf.has_value();
  }
  bool operator==(const SliceSequence&) const = default;
};

/// Full expansion: one slice per distinct score onset, with every note that
/// is still sounding duplicated into the slice. A note with onset o and
/// duration d appears in every slice whose onset lies in [o, o+d). Releases
/// do not create slices.
SliceSequence full_expand(const Piece& piece);

/// Merges runs of consecutive slices with identical pitch-class content
/// (pitches mod 12, as sets) into the first slice of the run. Idempotent.
SliceSequence merge_repeats(const SliceSequence& seq);

}  // namespace chordgram

#endif  // CHORDGRAM_EXPANSION_HPP
