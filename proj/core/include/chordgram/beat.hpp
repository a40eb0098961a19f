#ifndef CHORDGRAM_BEAT_HPP
#define CHORDGRAM_BEAT_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace chordgram {

/// Score time in beats, kept exact so that equal onsets compare equal.
/// Performance time is always a plain double in seconds.
using Beat = boost::rational<std::int64_t>;

inline std::string to_string(const Beat& b) {
  if (b.denominator() == 1) return std::to_string(b.numerator());
  return std::to_string(b.numerator()) + "/" + std::to_string(b.denominator());
}

}  // namespace chordgram

#endif  // CHORDGRAM_BEAT_HPP
