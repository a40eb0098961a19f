#include "chordgram/digest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chordgram/error.hpp"

namespace chordgram {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buffer.str())));
  return out;
}

}  // namespace chordgram
