#include "chordgram/skipgram.hpp"

#include <charconv>

namespace chordgram {

namespace {

std::vector<NGramInstance> materialize(const EncodedSequence& seq,
                                       const SelectionConfig& sel) {
  std::vector<NGramInstance> out;
  for_each_instance(
      seq, sel, [&](std::span<const std::uint32_t> idx, const NGramType& g) {
        NGramInstance inst;
        inst.piece_id = seq.piece_id;
        inst.indices.assign(idx.begin(), idx.end());
        if (seq.has_performance) {
          inst.onsets_perf.reserve(idx.size());
          for (auto i : idx)
            inst.onsets_perf.push_back(seq.slices[i].onset_perf);
        }
        inst.type = g;
        out.push_back(std::move(inst));
      });
  return out;
}

}  // namespace

std::vector<NGramInstance> enumerate_fixed(const EncodedSequence& seq, int n,
                                           int max_skip) {
  SelectionConfig sel;
  sel.n = n;
  sel.mode = SelectionMode::kFixed;
  sel.max_skip = max_skip;
  return materialize(seq, sel);
}

std::vector<NGramInstance> enumerate_variable(const EncodedSequence& seq,
                                              int n, double window_s,
                                              WindowScope scope) {
  SelectionConfig sel;
  sel.n = n;
  sel.mode = SelectionMode::kVariable;
  sel.window_s = window_s;
  sel.scope = scope;
  return materialize(seq, sel);
}

std::vector<NGramInstance> enumerate_instances(const EncodedSequence& seq,
                                               const SelectionConfig& sel) {
  return materialize(seq, sel);
}

std::uint64_t count_fixed_expected(int length, int n, int max_skip) {
  if (length < n || n < 1) return 0;
  if (n == 1) return static_cast<std::uint64_t>(length);

  std::uint64_t total = 0;
  const int max_s = std::min(max_skip, length - n);
  for (int s = 0; s <= max_s; ++s) {
    // Compositions of s skips into n-1 gaps: C(s + n - 2, n - 2).
    std::uint64_t comps = 1;
    for (int k = 1; k <= n - 2; ++k)
      comps = comps * static_cast<std::uint64_t>(s + k) /
              static_cast<std::uint64_t>(k);
    total += static_cast<std::uint64_t>(length - n - s + 1) * comps;
  }
  return total;
}

std::string to_string(const SelectionConfig& sel) {
  if (sel.mode == SelectionMode::kFixed)
    return "fixed:" + std::to_string(sel.max_skip);
  // Trim trailing zeros so 0.5 prints as "0.5" and 1.0 as "1".
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", sel.window_s);
  return std::string("variable:") + buf;
}

SelectionConfig parse_selection(const std::string& text, int n) {
  SelectionConfig sel;
  sel.n = n;
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error("selection must be fixed:<skips> or variable:<seconds>, got '" +
                text + "'");
  const std::string mode = text.substr(0, colon);
  const std::string param = text.substr(colon + 1);
  if (mode == "fixed") {
    sel.mode = SelectionMode::kFixed;
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(param.data(), param.data() + param.size(), value);
    if (ec != std::errc() || ptr != param.data() + param.size() || value < 0)
      throw Error("fixed selection needs an integer skip count >= 0, got '" +
                  param + "'");
    sel.max_skip = value;
  } else if (mode == "variable") {
    sel.mode = SelectionMode::kVariable;
    try {
      std::size_t pos = 0;
      sel.window_s = std::stod(param, &pos);
      if (pos != param.size()) throw std::invalid_argument(param);
    } catch (const std::exception&) {
      throw Error("variable selection needs a window in seconds, got '" +
                  param + "'");
    }
    if (sel.window_s <= 0)
      throw Error("variable selection window must be > 0");
  } else {
    throw Error("unknown selection mode '" + mode + "'");
  }
  return sel;
}

}  // namespace chordgram
