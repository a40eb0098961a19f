#ifndef CHORDGRAM_VLT_HPP
#define CHORDGRAM_VLT_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chordgram/error.hpp"
#include "chordgram/expansion.hpp"

namespace chordgram {

/// Key-invariant chord token: the set of pitch-class intervals above the
/// bass (lowest sounding pitch), reduced mod 12 and deduplicated. The empty
/// set encodes a solo bass note. Stored as a bitmask over bits 1..11.
struct ChordType {
  std::uint16_t mask = 0;

  std::vector<int> intervals() const {
    std::vector<int> out;
    for (int i = 1; i <= 11; ++i)
      if (mask & (1u << i)) out.push_back(i);
    return out;
  }
  bool contains(int interval) const { return mask & (1u << interval); }
  bool empty() const { return mask == 0; }

  auto operator<=>(const ChordType&) const = default;
};

struct ChordTypeHash {
  std::size_t operator()(const ChordType& c) const {
    return static_cast<std::size_t>(c.mask) * 0x9E3779B97F4A7C15ULL >> 16;
  }
};

/// An n-gram of chord types. The first token carries no bass motion; every
/// later token carries the mod-12 interval from the previous selected bass.
/// Tokens pack into 16 bits each: motion nibble (0xF = none) | chord mask.
class NGramType {
 public:
  static constexpr int kMaxN = 16;
  static constexpr std::uint8_t kNoMotion = 0xF;

  NGramType() = default;

  int size() const { return len_; }
  bool empty() const { return len_ == 0; }

  ChordType chord_at(int i) const {
    return ChordType{static_cast<std::uint16_t>(tok_[i] & 0x0FFFu)};
  }
  /// Motion of token i; -1 for the initial token.
  int motion_at(int i) const {
    const int m = tok_[i] >> 12;
    return m == kNoMotion ? -1 : m;
  }

  /// Appends the initial token (no motion).
  void push_initial(ChordType chord) {
    check_capacity();
    tok_[len_++] = static_cast<std::uint16_t>((kNoMotion << 12) | chord.mask);
  }
  /// Appends a non-initial token with bass motion in 0..11.
  void push(int motion, ChordType chord) {
    check_capacity();
    tok_[len_++] = static_cast<std::uint16_t>((motion << 12) | chord.mask);
  }
  void set_back(int motion, ChordType chord) {
    tok_[len_ - 1] = static_cast<std::uint16_t>((motion << 12) | chord.mask);
  }
  void pop() { tok_[--len_] = 0; }

  /// The first n-1 tokens.
  NGramType prefix() const {
    NGramType p = *this;
    p.pop();
    return p;
  }

  bool operator==(const NGramType& o) const {
    return len_ == o.len_ && tok_ == o.tok_;
  }
  bool operator<(const NGramType& o) const {
    if (len_ != o.len_) return len_ < o.len_;
    return tok_ < o.tok_;
  }

  std::uint64_t hash64() const {
    std::uint64_t h = 0xCBF29CE484222325ULL ^ len_;
    for (int i = 0; i < len_; ++i) {
      h ^= tok_[i];
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  void check_capacity() const {
    if (len_ >= kMaxN) throw Error("n-gram longer than supported maximum");
  }

  std::uint8_t len_ = 0;
  std::array<std::uint16_t, kMaxN> tok_{};  // zero beyond len_
};

struct NGramTypeHash {
  std::size_t operator()(const NGramType& g) const {
    return static_cast<std::size_t>(g.hash64());
  }
};

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

struct EncodedSlice {
  ChordType chord;
  std::uint8_t bass_pc = 0;   // min pitch mod 12
  double onset_perf = 0.0;    // valid only when the sequence is aligned
  Beat onset_score{0};
};

struct EncodedSequence {
  std::string piece_id;
  bool has_performance = false;
  std::vector<EncodedSlice> slices;

  std::size_t size() const { return slices.size(); }
};

/// bass = min(pitches); result = {(p - bass) mod 12} \ {0}.
ChordType encode_slice(const Slice& slice);

EncodedSequence encode_sequence(const SliceSequence& seq);

/// Builds the n-gram type for a strictly increasing index tuple: token 0 is
/// the chord at indices[0] with no motion, token j pairs the bass-pc
/// difference between the two selected slices with the chord at indices[j].
NGramType ngram_type(const EncodedSequence& seq,
                     const std::vector<std::uint32_t>& indices);

// ---------------------------------------------------------------------------
// Pattern text syntax
// ---------------------------------------------------------------------------
//
//   pattern  := element (";" element)*
//   element  := set | "(" MOTION ")" set
//   set      := "{" "}" | "{" IVL ("," IVL)* "}"
//   MOTION   := integer 0..11     IVL := integer 1..11
//
// The first element must not carry a motion; every later one must.
// Whitespace is ignored. Example: {4,9};(2){5,9};(0){4,7,10};(5){4,7}

/// Throws PatternError with the byte offset on malformed input.
NGramType parse_pattern(const std::string& text);

/// Canonical form: intervals ascending, no whitespace.
/// parse_pattern(format_pattern(g)) == g for every g.
std::string format_pattern(const NGramType& g);

/// Resolves either a named built-in target ("cadence:ii6-I64-V7-I") or a
/// pattern in the grammar above.
NGramType resolve_target(const std::string& name_or_pattern);

/// The built-in closing-formula target.
extern const char* const kCadenceTargetName;
extern const char* const kCadenceTargetPattern;

}  // namespace chordgram

#endif  // CHORDGRAM_VLT_HPP
