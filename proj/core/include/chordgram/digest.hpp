#ifndef CHORDGRAM_DIGEST_HPP
#define CHORDGRAM_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace chordgram {

/// FNV-1a over the bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// Digest of a file's contents as "fnv1a64:<16 hex digits>".
std::string digest_file(const std::string& path);

}  // namespace chordgram

#endif  // CHORDGRAM_DIGEST_HPP
