#ifndef CHORDGRAM_RANKING_HPP
#define CHORDGRAM_RANKING_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "chordgram/skipgram.hpp"
#include "chordgram/weighting.hpp"

namespace chordgram {

enum class Measure { kCount, kPmi, kDpmi, kLpmi, kPwpmi };

std::string to_string(Measure m);
Measure parse_measure(const std::string& text);

struct JointEntry {
  double weighted_count = 0.0;
  std::uint64_t raw_count = 0;
  std::set<std::string> pieces;  // pieces containing at least one instance
};

/// Weighted joint counts over n-gram types, plus the marginals the PMI
/// family needs: unweighted unigram chord counts over all slices, and the
/// (n-1)-gram weighted counts under the identical selection and weighting.
struct Distribution {
  int n = 0;
  std::string fingerprint;  // selection/weighting echo; must match to merge

  std::unordered_map<NGramType, JointEntry, NGramTypeHash> joint;
  std::unordered_map<ChordType, std::uint64_t, ChordTypeHash> unigram;
  std::unordered_map<NGramType, double, NGramTypeHash> prefix;

  double total_joint_weight = 0.0;
  std::uint64_t total_unigrams = 0;
  double total_prefix_weight = 0.0;
  std::uint64_t piece_count = 0;

  bool empty() const { return joint.empty(); }
};

std::string make_fingerprint(const SelectionConfig& sel,
                             const WeightScheme& weighting,
                             bool merged_repeats);

// ---------------------------------------------------------------------------
// Accumulation
// ---------------------------------------------------------------------------

/// Accumulates one piece into a fresh distribution.
Distribution accumulate_piece(const EncodedSequence& seq,
                              const SelectionConfig& sel,
                              const WeightScheme& weighting,
                              const std::string& fingerprint);

/// Weighted counting over a set of pieces. Per-piece subtotals are always
/// reduced in ascending piece_id order, so the result is independent of
/// `threads`.
Distribution accumulate(const std::vector<EncodedSequence>& seqs,
                        const SelectionConfig& sel,
                        const WeightScheme& weighting, bool merged_repeats,
                        int threads = 1);

/// Pointwise sum; requires equal fingerprints. merge(d, {}) == d.
Distribution merge(const Distribution& a, const Distribution& b);

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------
//
//   pmi    log2( p(g) / prod_i p(c_i) )
//   dpmi   log2( p(g) / ( p_prefix(g_1..g_{n-1}) * p(c_n) ) )
//   lpmi   weighted_count(g) * pmi(g)
//   pwpmi  |pieces(g)| * pmi(g)
//
// p(g) is weighted_count/total_joint_weight; chord marginals come from the
// unweighted unigram counts; bass motions contribute to identity only.

double score_pmi(const Distribution& d, const NGramType& g);
double score_dpmi(const Distribution& d, const NGramType& g);
double score_lpmi(const Distribution& d, const NGramType& g);
double score_pwpmi(const Distribution& d, const NGramType& g);
double score(const Distribution& d, const NGramType& g, Measure m);

// ---------------------------------------------------------------------------
// Rank tables
// ---------------------------------------------------------------------------

struct RankRow {
  std::size_t rank = 0;  // 1-based, consecutive, no shared ranks
  NGramType type;
  std::string pattern;
  double score = 0.0;
  double weighted_count = 0.0;
  std::uint64_t raw_count = 0;
  std::size_t piece_count = 0;
};

struct RankTable {
  Measure measure = Measure::kCount;
  std::vector<RankRow> rows;
};

/// Rows sorted by (score desc, weighted_count desc, pattern asc); the
/// `count` measure ranks by weighted_count directly. Throws on an empty
/// distribution.
RankTable build_rank_table(const Distribution& d, Measure m);

std::optional<std::size_t> rank_of(const RankTable& table, const NGramType& g);

/// CSV: rank,pattern,score,weighted_count,raw_count,piece_count with floats
/// printed to 6 decimals, rows in rank order.
void write_rank_table_csv(const RankTable& table, std::ostream& out,
                          std::size_t top = 0);
void write_rank_table_json(const RankTable& table, std::ostream& out,
                           std::size_t top = 0);

// ---------------------------------------------------------------------------
// Distribution files (output of `mine`, input of `rank`)
// ---------------------------------------------------------------------------

void write_distribution_json(const Distribution& d, std::ostream& out);
Distribution read_distribution_json(std::istream& in);

}  // namespace chordgram

#endif  // CHORDGRAM_RANKING_HPP
