#ifndef CHORDGRAM_VERSION_HPP
#define CHORDGRAM_VERSION_HPP

namespace chordgram {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chordgram

#endif  // CHORDGRAM_VERSION_HPP
