// Shared fixtures: deterministic piece builders and random generators.

#ifndef CHORDGRAM_TESTS_TEST_UTIL_HPP
#define CHORDGRAM_TESTS_TEST_UTIL_HPP

#include <string>
#include <vector>

#include "chordgram/corpus.hpp"
#include "chordgram/evaluation.hpp"
#include "chordgram/expansion.hpp"
#include "chordgram/rng.hpp"
#include "chordgram/vlt.hpp"

namespace testutil {

/// One sonority per beat, duration one beat, performance onsets on a
/// half-second grid. The workhorse for hand-computed fixtures.
inline chordgram::Piece beat_piece(
    const std::string& id, const std::vector<std::vector<int>>& chords,
    bool with_performance = true, double base_ioi = 0.5) {
  chordgram::Piece piece;
  piece.piece_id = id;
  for (std::size_t j = 0; j < chords.size(); ++j) {
    for (int pitch : chords[j]) {
      chordgram::NoteEvent e;
      e.pitch = pitch;
      e.onset_score = chordgram::Beat(static_cast<std::int64_t>(j));
      e.duration_score = chordgram::Beat(1);
      if (with_performance) {
        e.onset_perf = static_cast<double>(j) * base_ioi;
        e.duration_perf = base_ioi;
      }
      piece.events.push_back(e);
    }
  }
  std::sort(piece.events.begin(), piece.events.end(), chordgram::event_less);
  return piece;
}

inline chordgram::EncodedSequence encode_beats(
    const std::string& id, const std::vector<std::vector<int>>& chords,
    bool with_performance = true, double base_ioi = 0.5) {
  return chordgram::encode_sequence(
      chordgram::full_expand(beat_piece(id, chords, with_performance, base_ioi)));
}

/// Encoded sequence with explicit performance onsets, one dummy chord per
/// onset (chord content rotates so neighboring slices differ).
inline chordgram::EncodedSequence encode_onsets(
    const std::string& id, const std::vector<double>& onsets) {
  std::vector<std::vector<int>> chords;
  const std::vector<std::vector<int>> shapes = {
      {60, 64, 67}, {62, 65, 69}, {64, 67, 71}, {65, 69, 72}};
  chordgram::Piece piece;
  piece.piece_id = id;
  for (std::size_t j = 0; j < onsets.size(); ++j) {
    for (int pitch : shapes[j % shapes.size()]) {
      chordgram::NoteEvent e;
      e.pitch = pitch;
      e.onset_score = chordgram::Beat(static_cast<std::int64_t>(j));
      e.duration_score = chordgram::Beat(1);
      e.onset_perf = onsets[j];
      e.duration_perf = 0.1;
      piece.events.push_back(e);
    }
  }
  std::sort(piece.events.begin(), piece.events.end(), chordgram::event_less);
  return chordgram::encode_sequence(chordgram::full_expand(piece));
}

/// Random piece with overlapping durations and fractional onsets; score
/// onsets map monotonically to strictly increasing performance times.
inline chordgram::Piece random_piece(chordgram::SplitMix64& rng,
                                     const std::string& id, int max_events,
                                     bool with_performance = true,
                                     int pitch_low = 24, int pitch_high = 103) {
  chordgram::Piece piece;
  piece.piece_id = id;
  const int events = static_cast<int>(rng.uniform_int(1, max_events));
  for (int i = 0; i < events; ++i) {
    chordgram::NoteEvent e;
    e.pitch = static_cast<int>(rng.uniform_int(pitch_low, pitch_high));
    const std::int64_t den = rng.uniform_int(1, 4);
    e.onset_score = chordgram::Beat(rng.uniform_int(0, 24), den);
    e.duration_score =
        chordgram::Beat(rng.uniform_int(1, 8), rng.uniform_int(1, 4));
    piece.events.push_back(e);
  }
  std::sort(piece.events.begin(), piece.events.end(), chordgram::event_less);

  if (with_performance) {
    // Strictly increasing performance time per distinct score onset.
    double t = 0.0;
    chordgram::Beat prev = piece.events.front().onset_score;
    for (auto& e : piece.events) {
      if (e.onset_score != prev) {
        t += 0.1 + 0.9 * rng.uniform();
        prev = e.onset_score;
      }
      e.onset_perf = t;
      e.duration_perf = 0.1 + rng.uniform();
    }
  }
  return piece;
}

inline chordgram::Corpus random_corpus(chordgram::SplitMix64& rng,
                                       int max_pieces, int max_events,
                                       bool with_performance = true) {
  chordgram::Corpus corpus;
  const int pieces = static_cast<int>(rng.uniform_int(1, max_pieces));
  for (int p = 0; p < pieces; ++p) {
    char name[16];
    std::snprintf(name, sizeof name, "p%03d", p);
    corpus.pieces.push_back(
        random_piece(rng, name, max_events, with_performance));
  }
  return corpus;
}

}  // namespace testutil

#endif  // CHORDGRAM_TESTS_TEST_UTIL_HPP
