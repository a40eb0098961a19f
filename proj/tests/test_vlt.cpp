#include <doctest.h>

#include <algorithm>
#include <set>

#include "chordgram/rng.hpp"
#include "chordgram/skipgram.hpp"
#include "chordgram/vlt.hpp"
#include "test_util.hpp"

using namespace chordgram;

namespace {

Slice make_slice(std::vector<int> pitches) {
  Slice s;
  s.onset_score = Beat(0);
  s.pitches = std::move(pitches);
  std::sort(s.pitches.begin(), s.pitches.end());
  return s;
}

/// The four cadence sonorities in C major.
const std::vector<std::vector<int>> kCadence = {
    {65, 69, 74}, {67, 72, 76}, {55, 59, 62, 65}, {60, 64, 67}};

NGramType random_gram(SplitMix64& rng, int max_len = 6) {
  NGramType g;
  const int len = static_cast<int>(rng.uniform_int(1, max_len));
  for (int i = 0; i < len; ++i) {
    ChordType chord;
    chord.mask = static_cast<std::uint16_t>(rng.next() & 0x0FFE);
    if (i == 0)
      g.push_initial(chord);
    else
      g.push(static_cast<int>(rng.uniform_int(0, 11)), chord);
  }
  return g;
}

}  // namespace

TEST_CASE("encode_slice: interval sets above the bass") {
  CHECK(encode_slice(make_slice({60, 64, 67})).intervals() ==
        std::vector<int>{4, 7});
  CHECK(encode_slice(make_slice({65, 69, 74})).intervals() ==
        std::vector<int>{4, 9});
  CHECK(encode_slice(make_slice({55, 59, 62, 65})).intervals() ==
        std::vector<int>{4, 7, 10});
  // Octave doubling reduces to a solo bass.
  CHECK(encode_slice(make_slice({60, 72})).empty());
  // Dense cluster: never contains 0, at most 11 intervals.
  std::vector<int> chromatic;
  for (int p = 48; p < 72; ++p) chromatic.push_back(p);
  const ChordType c = encode_slice(make_slice(chromatic));
  CHECK(c.intervals().size() == 11);
  CHECK_FALSE(c.contains(0));
}

TEST_CASE("encode_sequence: bass pitch classes and order") {
  const EncodedSequence empty = encode_sequence(SliceSequence{});
  CHECK(empty.slices.empty());

  const EncodedSequence one = testutil::encode_beats("p", {{60, 64, 67}});
  REQUIRE(one.slices.size() == 1);
  CHECK(one.slices[0].bass_pc == 0);
  CHECK(one.slices[0].chord.intervals() == std::vector<int>{4, 7});

  const EncodedSequence two =
      testutil::encode_beats("p", {{65, 69, 74}, {55, 59, 62, 65}});
  CHECK(two.slices[0].bass_pc == 5);
  CHECK(two.slices[1].bass_pc == 7);
}

TEST_CASE("ngram_type: the cadence four-gram") {
  const EncodedSequence seq = testutil::encode_beats("p", kCadence);
  const NGramType g = ngram_type(seq, {0, 1, 2, 3});
  CHECK(format_pattern(g) == "{4,9};(2){5,9};(0){4,7,10};(5){4,7}");
  CHECK(g == parse_pattern(kCadenceTargetPattern));
  CHECK(g == resolve_target(kCadenceTargetName));
}

TEST_CASE("ngram_type: transposition leaves the type unchanged") {
  const EncodedSequence base = testutil::encode_beats("p", kCadence);
  for (int k : {-12, -5, 3, 7, 12}) {
    std::vector<std::vector<int>> shifted = kCadence;
    for (auto& chord : shifted)
      for (auto& p : chord) p += k;
    const EncodedSequence seq = testutil::encode_beats("p", shifted);
    CHECK(ngram_type(seq, {0, 1, 2, 3}) == ngram_type(base, {0, 1, 2, 3}));
  }
}

TEST_CASE("ngram_type: single index gives a motionless 1-gram") {
  const EncodedSequence seq = testutil::encode_beats("p", {{60, 64, 67}});
  const NGramType g = ngram_type(seq, {0});
  CHECK(g.size() == 1);
  CHECK(g.motion_at(0) == -1);
  CHECK(format_pattern(g) == "{4,7}");
}

TEST_CASE("ngram_type: non-increasing indices rejected") {
  const EncodedSequence seq =
      testutil::encode_beats("p", {{60}, {62}, {64}});
  CHECK_THROWS_AS(ngram_type(seq, {1, 1}), Error);
  CHECK_THROWS_AS(ngram_type(seq, {2, 0}), Error);
}

TEST_CASE("parse_pattern: grammar basics") {
  CHECK(format_pattern(parse_pattern("{}")) == "{}");
  CHECK(parse_pattern("{9,4}") == parse_pattern("{4,9}"));
  CHECK(parse_pattern(" { 4 , 9 } ; ( 2 ) { 5 , 9 }") ==
        parse_pattern("{4,9};(2){5,9}"));
  CHECK(parse_pattern(kCadenceTargetPattern).size() == 4);
}

TEST_CASE("parse_pattern: rejections carry byte offsets") {
  CHECK_THROWS_AS(parse_pattern("(2){4}"), PatternError);       // initial motion
  CHECK_THROWS_AS(parse_pattern("{4};{5}"), PatternError);      // missing motion
  CHECK_THROWS_AS(parse_pattern("{0}"), PatternError);          // interval 0
  CHECK_THROWS_AS(parse_pattern("{12}"), PatternError);         // interval 12
  CHECK_THROWS_AS(parse_pattern("{4};(12){5}"), PatternError);  // motion 12
  CHECK_THROWS_AS(parse_pattern("{4"), PatternError);           // unterminated
  CHECK_THROWS_AS(parse_pattern(""), PatternError);
  CHECK_THROWS_AS(parse_pattern("{4};"), PatternError);

  try {
    parse_pattern("{4};(12){5}");
    FAIL("expected PatternError");
  } catch (const PatternError& e) {
    CHECK(e.offset() == 5);  // the '1' of "12"
  }
}

TEST_CASE("parse/format round trip on random patterns") {
  SplitMix64 rng(271828);
  for (int trial = 0; trial < 500; ++trial) {
    const NGramType g = random_gram(rng);
    CHECK(parse_pattern(format_pattern(g)) == g);
  }
}

TEST_CASE("format_pattern is injective on distinct grams") {
  SplitMix64 rng(1618);
  std::set<std::string> formatted;
  std::vector<NGramType> grams;
  for (int trial = 0; trial < 300; ++trial) {
    const NGramType g = random_gram(rng);
    if (std::find(grams.begin(), grams.end(), g) != grams.end()) continue;
    grams.push_back(g);
    CHECK(formatted.insert(format_pattern(g)).second);
  }
}

TEST_CASE("key invariance of the full encoding pipeline") {
  SplitMix64 rng(90210);
  for (int trial = 0; trial < 60; ++trial) {
    const Piece piece = testutil::random_piece(rng, "p", 20, true, 30, 97);
    const int k = static_cast<int>(rng.uniform_int(-24, 24));

    const EncodedSequence a = encode_sequence(full_expand(piece));
    const EncodedSequence b =
        encode_sequence(full_expand(transpose_piece(piece, k)));

    std::vector<NGramType> ga, gb;
    for_each_fixed(a, 2, 2,
                   [&](std::span<const std::uint32_t>, const NGramType& g) {
                     ga.push_back(g);
                   });
    for_each_fixed(b, 2, 2,
                   [&](std::span<const std::uint32_t>, const NGramType& g) {
                     gb.push_back(g);
                   });
    CHECK(ga == gb);  // same enumeration order, identical types
  }
}
