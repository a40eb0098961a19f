#include "chordgram/expansion.hpp"

#include <algorithm>
#include <map>

namespace chordgram {

SliceSequence full_expand(const Piece& piece) {
  SliceSequence seq;
  seq.piece_id = piece.piece_id;

  // One slice per distinct score onset; the performance onset of a slice is
  // the earliest attack among the events starting exactly there.
  std::map<Beat, Slice> slices;
  for (const auto& e : piece.events) {
    auto [it, inserted] = slices.try_emplace(e.onset_score);
    if (inserted) {
      it->second.onset_score = e.onset_score;
      it->second.onset_perf = e.onset_perf;
    } else if (e.onset_perf &&
               (!it->second.onset_perf || *e.onset_perf < *it->second.onset_perf)) {
      it->second.onset_perf = e.onset_perf;
    }
  }

  // Duplicate each note into every slice whose onset lies in [onset, onset+dur).
  for (const auto& e : piece.events) {
    const Beat end = e.onset_score + e.duration_score;
    for (auto it = slices.find(e.onset_score);
         it != slices.end() && it->first < end; ++it) {
      it->second.pitches.push_back(e.pitch);
    }
  }

  seq.slices.reserve(slices.size());
  for (auto& [onset, slice] : slices) {
    std::sort(slice.pitches.begin(), slice.pitches.end());
    slice.pitches.erase(
        std::unique(slice.pitches.begin(), slice.pitches.end()),
        slice.pitches.end());
    seq.slices.push_back(std::move(slice));
  }
  return seq;
}

namespace {

std::uint16_t pitch_class_set(const Slice& s) {
  std::uint16_t mask = 0;
  for (int p : s.pitches) mask |= static_cast<std::uint16_t>(1u << (p % 12));
  return mask;
}

}  // namespace

SliceSequence merge_repeats(const SliceSequence& seq) {
  SliceSequence out;
  out.piece_id = seq.piece_id;
  out.slices.reserve(seq.slices.size());
  for (const auto& slice : seq.slices) {
    if (!out.slices.empty() &&
        pitch_class_set(out.slices.back()) == pitch_class_set(slice))
      continue;  // restatement of the same pitch-class content
    out.slices.push_back(slice);
  }
  return out;
}

}  // namespace chordgram
