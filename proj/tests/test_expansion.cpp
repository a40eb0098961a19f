#include <doctest.h>

#include <set>

#include "chordgram/expansion.hpp"
#include "chordgram/rng.hpp"
#include "test_util.hpp"

using namespace chordgram;

namespace {

Piece make_piece(
    const std::vector<std::tuple<int, Beat, Beat>>& notes) {  // pitch, onset, dur
  Piece piece;
  piece.piece_id = "p";
  for (const auto& [pitch, onset, dur] : notes) {
    NoteEvent e;
    e.pitch = pitch;
    e.onset_score = onset;
    e.duration_score = dur;
    piece.events.push_back(e);
  }
  std::sort(piece.events.begin(), piece.events.end(), event_less);
  return piece;
}

/// Naive reference: for each distinct onset, scan every event for membership.
SliceSequence naive_expand(const Piece& piece) {
  std::set<Beat> onsets;
  for (const auto& e : piece.events) onsets.insert(e.onset_score);
  SliceSequence seq;
  seq.piece_id = piece.piece_id;
  for (const Beat& o : onsets) {
    Slice slice;
    slice.onset_score = o;
    std::set<int> pitches;
    for (const auto& e : piece.events) {
      if (e.onset_score <= o && o < e.onset_score + e.duration_score)
        pitches.insert(e.pitch);
      if (e.onset_score == o && e.onset_perf &&
          (!slice.onset_perf || *e.onset_perf < *slice.onset_perf))
        slice.onset_perf = e.onset_perf;
    }
    slice.pitches.assign(pitches.begin(), pitches.end());
    seq.slices.push_back(std::move(slice));
  }
  return seq;
}

}  // namespace

TEST_CASE("full_expand: sustained note duplicated into the next slice") {
  const Piece piece = make_piece(
      {{60, Beat(0), Beat(2)}, {64, Beat(0), Beat(1)}, {67, Beat(1), Beat(1)}});
  const SliceSequence seq = full_expand(piece);
  REQUIRE(seq.slices.size() == 2);
  CHECK(seq.slices[0].onset_score == Beat(0));
  CHECK(seq.slices[0].pitches == std::vector<int>{60, 64});
  CHECK(seq.slices[1].onset_score == Beat(1));
  CHECK(seq.slices[1].pitches == std::vector<int>{60, 67});
}

TEST_CASE("full_expand: single event, identical pair, unison dedup") {
  CHECK(full_expand(make_piece({{72, Beat(0), Beat(1)}})).slices.size() == 1);

  const SliceSequence pair = full_expand(
      make_piece({{60, Beat(0), Beat(1)}, {64, Beat(0), Beat(1)}}));
  REQUIRE(pair.slices.size() == 1);
  CHECK(pair.slices[0].pitches == std::vector<int>{60, 64});

  // Unison doubling collapses under set semantics.
  const SliceSequence unison = full_expand(
      make_piece({{60, Beat(0), Beat(1)}, {60, Beat(0), Beat(2)}}));
  CHECK(unison.slices[0].pitches == std::vector<int>{60});
}

TEST_CASE("full_expand: no slice at a release without an attack") {
  // The long note ends at 2 while the short one ends at 1; nothing attacks
  // at 1, so there is no slice there.
  const Piece piece =
      make_piece({{60, Beat(0), Beat(2)}, {64, Beat(0), Beat(1)}});
  CHECK(full_expand(piece).slices.size() == 1);
}

TEST_CASE("full_expand: slice perf onset is the earliest attack") {
  Piece piece;
  piece.piece_id = "p";
  for (int i = 0; i < 2; ++i) {
    NoteEvent e;
    e.pitch = 60 + i;
    e.onset_score = Beat(0);
    e.duration_score = Beat(1);
    e.onset_perf = i == 0 ? 0.25 : 0.20;  // spread chord, second note earlier
    e.duration_perf = 0.5;
    piece.events.push_back(e);
  }
  std::sort(piece.events.begin(), piece.events.end(), event_less);
  const SliceSequence seq = full_expand(piece);
  CHECK(*seq.slices[0].onset_perf == doctest::Approx(0.20));
}

TEST_CASE("full_expand: slice count equals distinct onsets; membership law") {
  SplitMix64 rng(4711);
  for (int trial = 0; trial < 100; ++trial) {
    const Piece piece = testutil::random_piece(rng, "p", 30, trial % 2 == 0);
    const SliceSequence seq = full_expand(piece);

    std::set<Beat> onsets;
    for (const auto& e : piece.events) onsets.insert(e.onset_score);
    CHECK(seq.slices.size() == onsets.size());

    // Strictly increasing onsets.
    for (std::size_t i = 1; i < seq.slices.size(); ++i)
      CHECK(seq.slices[i - 1].onset_score < seq.slices[i].onset_score);

    // A note appears in exactly the slices covering [onset, onset+dur).
    for (const auto& e : piece.events) {
      for (const auto& slice : seq.slices) {
        const bool covered = e.onset_score <= slice.onset_score &&
                             slice.onset_score <
                                 e.onset_score + e.duration_score;
        const bool present =
            std::find(slice.pitches.begin(), slice.pitches.end(), e.pitch) !=
            slice.pitches.end();
        if (covered) CHECK(present);
      }
    }
  }
}

TEST_CASE("full_expand: agrees with the naive membership scan") {
  SplitMix64 rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const Piece piece = testutil::random_piece(rng, "p", 30, trial % 2 == 0);
    CHECK(full_expand(piece) == naive_expand(piece));
  }
}

TEST_CASE("merge_repeats: identical neighbor collapses") {
  const SliceSequence seq = full_expand(testutil::beat_piece(
      "p", {{60, 64, 67}, {60, 64, 67}, {65, 69}}, false));
  const SliceSequence merged = merge_repeats(seq);
  REQUIRE(merged.slices.size() == 2);
  CHECK(merged.slices[0].pitches == std::vector<int>{60, 64, 67});
  CHECK(merged.slices[0].onset_score == Beat(0));
  CHECK(merged.slices[1].pitches == std::vector<int>{65, 69});
}

TEST_CASE("merge_repeats: pitch-class equality, not absolute pitch") {
  const SliceSequence seq = full_expand(
      testutil::beat_piece("p", {{60, 64, 67}, {72, 76, 79}}, false));
  const SliceSequence merged = merge_repeats(seq);
  REQUIRE(merged.slices.size() == 1);
  CHECK(merged.slices[0].pitches == std::vector<int>{60, 64, 67});
}

TEST_CASE("merge_repeats: no adjacent duplicates leaves input unchanged") {
  const SliceSequence seq = full_expand(
      testutil::beat_piece("p", {{60}, {62}, {64}, {62}}, false));
  CHECK(merge_repeats(seq) == seq);
}

TEST_CASE("merge_repeats: idempotent") {
  SplitMix64 rng(31415);
  for (int trial = 0; trial < 50; ++trial) {
    const Piece piece = testutil::random_piece(rng, "p", 25, false, 60, 66);
    const SliceSequence once = merge_repeats(full_expand(piece));
    CHECK(merge_repeats(once) == once);
  }
}
