#include <doctest.h>

#include <set>

#include "chordgram/rng.hpp"
#include "chordgram/skipgram.hpp"
#include "test_util.hpp"

using namespace chordgram;

namespace {

EncodedSequence dummy_sequence(int length) {
  std::vector<std::vector<int>> chords;
  const std::vector<std::vector<int>> shapes = {
      {60, 64, 67}, {62, 65, 69}, {64, 67, 71}, {65, 69, 72}, {67, 71, 74}};
  for (int i = 0; i < length; ++i) chords.push_back(shapes[i % shapes.size()]);
  return testutil::encode_beats("p", chords);
}

std::vector<std::vector<std::uint32_t>> index_tuples(
    const std::vector<NGramInstance>& instances) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& inst : instances) out.push_back(inst.indices);
  return out;
}

/// Reference filter over every combination.
std::vector<std::vector<std::uint32_t>> brute_force(const EncodedSequence& seq,
                                                    int n,
                                                    const SelectionConfig& sel) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(n));
  const auto L = static_cast<std::uint32_t>(seq.size());
  const auto rec = [&](auto&& self, int depth, std::uint32_t start) -> void {
    if (depth == n) {
      if (sel.mode == SelectionMode::kFixed) {
        int skip = 0;
        for (int j = 1; j < n; ++j)
          skip += static_cast<int>(idx[j] - idx[j - 1]) - 1;
        if (skip > sel.max_skip) return;
      } else if (sel.scope == WindowScope::kPair) {
        for (int j = 1; j < n; ++j)
          if (seq.slices[idx[j]].onset_perf -
                  seq.slices[idx[j - 1]].onset_perf >
              sel.window_s)
            return;
      } else {
        if (seq.slices[idx[n - 1]].onset_perf - seq.slices[idx[0]].onset_perf >
            sel.window_s)
          return;
      }
      out.push_back(idx);
      return;
    }
    for (std::uint32_t i = start; i < L; ++i) {
      idx[static_cast<std::size_t>(depth)] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace

TEST_CASE("enumerate_fixed: contiguous bigrams at t = 0") {
  const auto instances = enumerate_fixed(dummy_sequence(5), 2, 0);
  REQUIRE(instances.size() == 4);
  CHECK(index_tuples(instances) ==
        std::vector<std::vector<std::uint32_t>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}

TEST_CASE("enumerate_fixed: one skip adds the three stretched pairs") {
  const auto instances = enumerate_fixed(dummy_sequence(5), 2, 1);
  CHECK(instances.size() == 7);
  CHECK(index_tuples(instances) ==
        std::vector<std::vector<std::uint32_t>>{
            {0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}});
}

TEST_CASE("enumerate_fixed: L=6 n=3 t=2 yields 16 instances") {
  const auto instances = enumerate_fixed(dummy_sequence(6), 3, 2);
  CHECK(instances.size() == 16);
  CHECK(count_fixed_expected(6, 3, 2) == 16);
}

TEST_CASE("enumerate_fixed: instances carry their types") {
  const EncodedSequence seq = dummy_sequence(4);
  for (const auto& inst : enumerate_fixed(seq, 2, 2))
    CHECK(inst.type == ngram_type(seq, inst.indices));
}

TEST_CASE("count_fixed_expected: closed form") {
  CHECK(count_fixed_expected(5, 2, 1) == 7);
  for (int L = 2; L <= 12; ++L)
    for (int n = 2; n <= L; ++n)
      CHECK(count_fixed_expected(L, n, 0) ==
            static_cast<std::uint64_t>(L - n + 1));
  CHECK(count_fixed_expected(3, 4, 5) == 0);
  CHECK(count_fixed_expected(10, 1, 3) == 10);
}

TEST_CASE("enumerate_fixed matches the closed form") {
  for (int L = 1; L <= 25; ++L) {
    const EncodedSequence seq = dummy_sequence(L);
    for (int n = 2; n <= 5; ++n)
      for (int t = 0; t <= 6; ++t)
        CHECK(enumerate_fixed(seq, n, t).size() ==
              count_fixed_expected(L, n, t));
  }
}

TEST_CASE("enumerate_fixed: monotone in the skip budget") {
  const EncodedSequence seq = dummy_sequence(10);
  for (int t = 0; t < 4; ++t) {
    const auto small = index_tuples(enumerate_fixed(seq, 3, t));
    const auto large = index_tuples(enumerate_fixed(seq, 3, t + 1));
    const std::set<std::vector<std::uint32_t>> large_set(large.begin(),
                                                         large.end());
    for (const auto& tuple : small) CHECK(large_set.count(tuple) == 1);
  }
}

TEST_CASE("enumerate_variable: pairwise window, inclusive comparison") {
  const EncodedSequence seq =
      testutil::encode_onsets("p", {0.0, 0.4, 0.9, 2.5});
  const auto instances = enumerate_variable(seq, 2, 0.5);
  // Gaps are 0.4, 0.5, 1.6; 0.5 <= w is inside the window.
  CHECK(index_tuples(instances) ==
        std::vector<std::vector<std::uint32_t>>{{0, 1}, {1, 2}});
}

TEST_CASE("enumerate_variable: vacuous window selects every pair") {
  const EncodedSequence seq = dummy_sequence(8);
  CHECK(enumerate_variable(seq, 2, 1e9).size() == 8 * 7 / 2);
}

TEST_CASE("enumerate_variable: trigram window") {
  const EncodedSequence seq =
      testutil::encode_onsets("p", {0.0, 0.4, 0.8, 1.6});
  const auto instances = enumerate_variable(seq, 3, 0.5);
  CHECK(index_tuples(instances) ==
        std::vector<std::vector<std::uint32_t>>{{0, 1, 2}});
}

TEST_CASE("enumerate_variable: monotone in the window") {
  const EncodedSequence seq =
      testutil::encode_onsets("p", {0.0, 0.3, 0.5, 1.1, 1.2, 2.0, 2.2});
  for (double w : {0.3, 0.6, 0.9, 1.2}) {
    const auto small = index_tuples(enumerate_variable(seq, 3, w));
    const auto large = index_tuples(enumerate_variable(seq, 3, w + 0.3));
    const std::set<std::vector<std::uint32_t>> large_set(large.begin(),
                                                         large.end());
    for (const auto& tuple : small) CHECK(large_set.count(tuple) == 1);
  }
}

TEST_CASE("enumerate_variable: span scope bounds first-to-last distance") {
  const EncodedSequence seq =
      testutil::encode_onsets("p", {0.0, 0.4, 0.8, 1.2});
  // Pairwise admits (0,1,2,3)-style chains; span 0.8 cuts tuples wider
  // than 0.8 overall.
  const auto pair_mode = enumerate_variable(seq, 3, 0.8, WindowScope::kPair);
  const auto span_mode = enumerate_variable(seq, 3, 0.8, WindowScope::kSpan);
  CHECK(pair_mode.size() == 4);  // all C(4,3) tuples have pair gaps <= 0.8
  CHECK(index_tuples(span_mode) ==
        std::vector<std::vector<std::uint32_t>>{{0, 1, 2}, {1, 2, 3}});
}

TEST_CASE("enumerate_variable: requires performance times") {
  const EncodedSequence seq =
      testutil::encode_beats("p", {{60}, {62}, {64}}, false);
  CHECK_THROWS_AS(enumerate_variable(seq, 2, 1.0), Error);
}

TEST_CASE("enumerators agree with the combination filter") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 60; ++trial) {
    const Piece piece = testutil::random_piece(rng, "p", 20);
    const EncodedSequence seq = encode_sequence(full_expand(piece));
    const int n = static_cast<int>(rng.uniform_int(2, 4));

    SelectionConfig fixed;
    fixed.n = n;
    fixed.mode = SelectionMode::kFixed;
    fixed.max_skip = static_cast<int>(rng.uniform_int(0, 4));
    CHECK(index_tuples(enumerate_instances(seq, fixed)) ==
          brute_force(seq, n, fixed));

    SelectionConfig variable;
    variable.n = n;
    variable.mode = SelectionMode::kVariable;
    variable.window_s = 0.5 + rng.uniform() * 1.5;
    variable.scope = rng.next() % 2 ? WindowScope::kPair : WindowScope::kSpan;
    CHECK(index_tuples(enumerate_instances(seq, variable)) ==
          brute_force(seq, n, variable));
  }
}

TEST_CASE("streams contain no duplicate tuples") {
  const EncodedSequence seq = dummy_sequence(12);
  const auto instances = enumerate_fixed(seq, 3, 4);
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& inst : instances)
    CHECK(seen.insert(inst.indices).second);
}

TEST_CASE("selection parsing round trip") {
  CHECK(to_string(parse_selection("fixed:3", 4)) == "fixed:3");
  CHECK(to_string(parse_selection("variable:0.5", 4)) == "variable:0.5");
  CHECK(parse_selection("variable:2", 3).window_s == doctest::Approx(2.0));
  CHECK_THROWS_AS(parse_selection("fixed:-1", 2), Error);
  CHECK_THROWS_AS(parse_selection("variable:0", 2), Error);
  CHECK_THROWS_AS(parse_selection("nearby:1", 2), Error);
  CHECK_THROWS_AS(parse_selection("fixed", 2), Error);
}
