#include "chordgram/vlt.hpp"

#include <algorithm>
#include <cctype>

namespace chordgram {

const char* const kCadenceTargetName = "cadence:ii6-I64-V7-I";
const char* const kCadenceTargetPattern = "{4,9};(2){5,9};(0){4,7,10};(5){4,7}";

ChordType encode_slice(const Slice& slice) {
  if (slice.pitches.empty()) throw Error("cannot encode an empty slice");
  const int bass = *std::min_element(slice.pitches.begin(),
                                     slice.pitches.end());
  ChordType chord;
  for (int p : slice.pitches) {
    const int interval = (p - bass) % 12;
    if (interval != 0) chord.mask |= static_cast<std::uint16_t>(1u << interval);
  }
  return chord;
}

EncodedSequence encode_sequence(const SliceSequence& seq) {
  EncodedSequence out;
  out.piece_id = seq.piece_id;
  out.has_performance = seq.has_performance();
  out.slices.reserve(seq.slices.size());
  for (const auto& slice : seq.slices) {
    EncodedSlice es;
    es.chord = encode_slice(slice);
    es.bass_pc = static_cast<std::uint8_t>(
        *std::min_element(slice.pitches.begin(), slice.pitches.end()) % 12);
    es.onset_perf = slice.onset_perf.value_or(0.0);
    es.onset_score = slice.onset_score;
    out.slices.push_back(es);
  }
  return out;
}

NGramType ngram_type(const EncodedSequence& seq,
                     const std::vector<std::uint32_t>& indices) {
  if (indices.empty()) throw Error("index tuple must be nonempty");
  NGramType g;
  g.push_initial(seq.slices.at(indices[0]).chord);
  for (std::size_t j = 1; j < indices.size(); ++j) {
    if (indices[j] <= indices[j - 1])
      throw Error("index tuple must be strictly increasing");
    const auto& prev = seq.slices.at(indices[j - 1]);
    const auto& cur = seq.slices.at(indices[j]);
    g.push((cur.bass_pc + 12 - prev.bass_pc) % 12, cur.chord);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Pattern parser (recursive descent over the tiny grammar)
// ---------------------------------------------------------------------------

namespace {

class PatternParser {
 public:
  explicit PatternParser(const std::string& text) : text_(text) {}

  NGramType parse() {
    NGramType g;
    parse_element(g, true);
    skip_ws();
    while (!at_end()) {
      expect(';');
      parse_element(g, false);
      skip_ws();
    }
    return g;
  }

 private:
  void parse_element(NGramType& g, bool initial) {
    skip_ws();
    if (at_end()) throw PatternError(pos_, "expected element");
    if (peek() == '(') {
      if (initial)
        throw PatternError(pos_, "initial element must not carry a motion");
      ++pos_;
      const int motion = parse_int(0, 11, "motion");
      skip_ws();
      expect(')');
      g.push(motion, parse_set());
    } else {
      if (!initial)
        throw PatternError(pos_,
                           "non-initial element must carry a (motion) prefix");
      g.push_initial(parse_set());
    }
  }

  ChordType parse_set() {
    skip_ws();
    expect('{');
    ChordType chord;
    skip_ws();
    if (!at_end() && peek() == '}') {
      ++pos_;
      return chord;  // solo bass
    }
    while (true) {
      const int interval = parse_int(1, 11, "interval");
      chord.mask |= static_cast<std::uint16_t>(1u << interval);
      skip_ws();
      if (at_end()) throw PatternError(pos_, "unterminated set");
      const char c = peek();
      ++pos_;
      if (c == '}') return chord;
      if (c != ',')
        throw PatternError(pos_ - 1, "expected ',' or '}' in set");
    }
  }

  int parse_int(int lo, int hi, const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    int value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > 1000) throw PatternError(start, "number too large");
      ++pos_;
    }
    if (pos_ == start)
      throw PatternError(pos_, std::string("expected ") + what);
    if (value < lo || value > hi)
      throw PatternError(start, std::string(what) + " " +
                                    std::to_string(value) + " outside " +
                                    std::to_string(lo) + ".." +
                                    std::to_string(hi));
    return value;
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || peek() != c)
      throw PatternError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

NGramType parse_pattern(const std::string& text) {
  PatternParser parser(text);
  NGramType g = parser.parse();
  if (g.empty()) throw PatternError(0, "empty pattern");
  return g;
}

std::string format_pattern(const NGramType& g) {
  std::string out;
  for (int i = 0; i < g.size(); ++i) {
    if (i > 0) {
      out += ";(";
      out += std::to_string(g.motion_at(i));
      out += ')';
    }
    out += '{';
    bool first = true;
    for (int interval : g.chord_at(i).intervals()) {
      if (!first) out += ',';
      out += std::to_string(interval);
      first = false;
    }
    out += '}';
  }
  return out;
}

NGramType resolve_target(const std::string& name_or_pattern) {
  if (name_or_pattern == kCadenceTargetName)
    return parse_pattern(kCadenceTargetPattern);
  return parse_pattern(name_or_pattern);
}

}  // namespace chordgram
