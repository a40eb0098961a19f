#ifndef CHORDGRAM_SKIPGRAM_HPP
#define CHORDGRAM_SKIPGRAM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chordgram/error.hpp"
#include "chordgram/vlt.hpp"

namespace chordgram {

enum class SelectionMode { kFixed, kVariable };

/// In variable mode the temporal window applies either pairwise between
/// consecutive selected onsets or to the whole first-to-last span.
enum class WindowScope { kPair, kSpan };

struct SelectionConfig {
  int n = 2;
  SelectionMode mode = SelectionMode::kFixed;
  int max_skip = 0;      // fixed mode: total skipped positions allowed
  double window_s = 1.0; // variable mode: seconds between onsets
  WindowScope scope = WindowScope::kPair;

  bool requires_performance() const {
    return mode == SelectionMode::kVariable;
  }
};

std::string to_string(const SelectionConfig& sel);  // e.g. "fixed:3"
SelectionConfig parse_selection(const std::string& text, int n);

/// One enumerated occurrence.
struct NGramInstance {
  std::string piece_id;
  std::vector<std::uint32_t> indices;   // strictly increasing slice indices
  std::vector<double> onsets_perf;      // empty when the piece is unaligned
  NGramType type;
};

// ---------------------------------------------------------------------------
// Streaming enumeration
// ---------------------------------------------------------------------------
//
// Both enumerators visit index tuples in lexicographic order, never
// materializing the full combination space: fixed mode explores within a
// window of n + max_skip slices, variable mode stops extending a tuple as
// soon as the next onset falls outside the window.
//
// The callback receives (indices, type) for each instance; indices is only
// valid during the call.

namespace detail {

template <typename F>
void enumerate_rec_fixed(const EncodedSequence& seq, int n, int depth,
                         int budget, std::uint32_t* idx, NGramType& g, F& f) {
  if (depth == n) {
    f(std::span<const std::uint32_t>(idx, static_cast<std::size_t>(n)), g);
    return;
  }
  const auto L = static_cast<std::uint32_t>(seq.size());
  const std::uint32_t prev = idx[depth - 1];
  // Leave room for the remaining n-depth-1 picks after this one.
  const std::uint32_t last_start = L - static_cast<std::uint32_t>(n - depth);
  for (std::uint32_t next = prev + 1;
       next <= last_start && next <= prev + 1 + static_cast<std::uint32_t>(budget);
       ++next) {
    const int used = static_cast<int>(next - prev - 1);
    idx[depth] = next;
    const int motion =
        (seq.slices[next].bass_pc + 12 - seq.slices[prev].bass_pc) % 12;
    g.push(motion, seq.slices[next].chord);
    enumerate_rec_fixed(seq, n, depth + 1, budget - used, idx, g, f);
    g.pop();
  }
}

template <typename F>
void enumerate_rec_variable(const EncodedSequence& seq, int n, int depth,
                            double window_s, WindowScope scope,
                            std::uint32_t* idx, NGramType& g, F& f) {
  if (depth == n) {
    f(std::span<const std::uint32_t>(idx, static_cast<std::size_t>(n)), g);
    return;
  }
  const auto L = static_cast<std::uint32_t>(seq.size());
  const std::uint32_t prev = idx[depth - 1];
  const std::uint32_t last_start = L - static_cast<std::uint32_t>(n - depth);
  const double anchor = scope == WindowScope::kPair
                            ? seq.slices[prev].onset_perf
                            : seq.slices[idx[0]].onset_perf;
  for (std::uint32_t next = prev + 1; next <= last_start; ++next) {
    // Onsets are non-decreasing, so the first miss ends the scan.
    if (seq.slices[next].onset_perf - anchor > window_s) break;
    idx[depth] = next;
    const int motion =
        (seq.slices[next].bass_pc + 12 - seq.slices[prev].bass_pc) % 12;
    g.push(motion, seq.slices[next].chord);
    enumerate_rec_variable(seq, n, depth + 1, window_s, scope, idx, g, f);
    g.pop();
  }
}

}  // namespace detail

/// Fixed skip-grams: all tuples i1<...<in whose total skip
/// sum(i_{j+1} - i_j - 1) is at most max_skip.
template <typename F>
void for_each_fixed(const EncodedSequence& seq, int n, int max_skip, F&& f) {
  if (n < 1 || static_cast<std::size_t>(n) > seq.size()) return;
  std::uint32_t idx[NGramType::kMaxN];
  NGramType g;
  const auto L = static_cast<std::uint32_t>(seq.size());
  for (std::uint32_t i0 = 0; i0 + static_cast<std::uint32_t>(n) <= L; ++i0) {
    idx[0] = i0;
    g.push_initial(seq.slices[i0].chord);
    detail::enumerate_rec_fixed(seq, n, 1, max_skip, idx, g, f);
    g.pop();
  }
}

/// Variable skip-grams: tuples whose selected onsets satisfy the temporal
/// window (inclusive). Requires a performance-aligned sequence.
template <typename F>
void for_each_variable(const EncodedSequence& seq, int n, double window_s,
                       WindowScope scope, F&& f) {
  if (!seq.has_performance)
    throw Error("piece '" + seq.piece_id +
                "' lacks performance times required by variable selection");
  if (n < 1 || static_cast<std::size_t>(n) > seq.size()) return;
  std::uint32_t idx[NGramType::kMaxN];
  NGramType g;
  const auto L = static_cast<std::uint32_t>(seq.size());
  for (std::uint32_t i0 = 0; i0 + static_cast<std::uint32_t>(n) <= L; ++i0) {
    idx[0] = i0;
    g.push_initial(seq.slices[i0].chord);
    detail::enumerate_rec_variable(seq, n, 1, window_s, scope, idx, g, f);
    g.pop();
  }
}

template <typename F>
void for_each_instance(const EncodedSequence& seq, const SelectionConfig& sel,
                       F&& f) {
  if (sel.mode == SelectionMode::kFixed)
    for_each_fixed(seq, sel.n, sel.max_skip, f);
  else
    for_each_variable(seq, sel.n, sel.window_s, sel.scope, f);
}

// Materializing wrappers, mainly for tests and instance dumps.
std::vector<NGramInstance> enumerate_fixed(const EncodedSequence& seq, int n,
                                           int max_skip);
std::vector<NGramInstance> enumerate_variable(
    const EncodedSequence& seq, int n, double window_s,
    WindowScope scope = WindowScope::kPair);
std::vector<NGramInstance> enumerate_instances(const EncodedSequence& seq,
                                               const SelectionConfig& sel);

/// Closed-form count of fixed skip-grams over a sequence of length L:
/// sum over s = 0..min(t, L-n) of (L-n-s+1) * C(s+n-2, n-2).
std::uint64_t count_fixed_expected(int length, int n, int max_skip);

}  // namespace chordgram

#endif  // CHORDGRAM_SKIPGRAM_HPP
