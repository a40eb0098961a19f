#include "chordgram/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "chordgram/expansion.hpp"
#include "chordgram/rng.hpp"

namespace chordgram {

namespace {

void check_params(const SynthParams& p) {
  if (p.pieces < 1) throw Error("pieces must be >= 1");
  if (p.slices_per_piece < 4) throw Error("slices_per_piece must be >= 4");
  if (p.plant_rate < 0 || p.plant_rate > 1)
    throw Error("plant_rate must be in [0,1]");
  if (p.base_ioi <= 0) throw Error("base_ioi must be > 0");
  if (p.timing_jitter < 0) throw Error("timing_jitter must be >= 0");
  if (p.chord_size < 1) throw Error("chord_size must be >= 1");
  if (p.palette_size < 0) throw Error("palette_size must be >= 0");
  if (p.pitch_low < 0 || p.pitch_range < 0 ||
      p.pitch_low + p.pitch_range > 127)
    throw Error("pitch window must lie within 0..127");
}

std::vector<int> draw_chord(SplitMix64& rng, const SynthParams& p) {
  std::vector<int> chord(static_cast<std::size_t>(p.chord_size));
  for (auto& pitch : chord)
    pitch = p.pitch_low + static_cast<int>(rng.uniform_int(0, p.pitch_range));
  return chord;
}

std::string piece_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth_%04d", index + 1);
  return buf;
}

int planted_piece_count(const SynthParams& p) {
  const int count =
      static_cast<int>(std::ceil(p.plant_rate * p.pieces - 1e-9));
  return std::clamp(count, 0, p.pieces);
}

}  // namespace

Corpus generate_corpus(const SynthParams& params) {
  check_params(params);
  SplitMix64 rng(params.seed);

  Corpus corpus;
  corpus.pieces.reserve(static_cast<std::size_t>(params.pieces));
  for (int pi = 0; pi < params.pieces; ++pi) {
    Piece piece;
    piece.piece_id = piece_name(pi);

    std::vector<std::vector<int>> palette;
    for (int c = 0; c < params.palette_size; ++c)
      palette.push_back(draw_chord(rng, params));

    double prev_onset = -1.0;
    for (int j = 0; j < params.slices_per_piece; ++j) {
      const std::vector<int> chord =
          palette.empty()
              ? draw_chord(rng, params)
              : palette[static_cast<std::size_t>(rng.uniform_int(
                    0, params.palette_size - 1))];

      // Redraw jitter until onsets stay strictly increasing and nonnegative.
      double onset = 0.0;
      do {
        onset = j * params.base_ioi +
                (params.timing_jitter > 0
                     ? params.timing_jitter * rng.normal()
                     : 0.0);
      } while (onset <= prev_onset || onset < 0.0);
      prev_onset = onset;

      for (int pitch : chord) {
        NoteEvent e;
        e.pitch = pitch;
        e.onset_score = Beat(j);
        e.duration_score = Beat(1);
        e.onset_perf = onset;
        e.duration_perf = params.base_ioi;
        piece.events.push_back(e);
      }
    }
    std::sort(piece.events.begin(), piece.events.end(), event_less);
    corpus.pieces.push_back(std::move(piece));
  }
  return corpus;
}

const std::vector<std::vector<int>>& cadence_pitch_sets() {
  // F-A-D, G-C-E, G-B-D-F, C-E-G.
  static const std::vector<std::vector<int>> kSets = {
      {65, 69, 74}, {67, 72, 76}, {55, 59, 62, 65}, {60, 64, 67}};
  return kSets;
}

Corpus plant_pattern(const Corpus& corpus,
                     const std::vector<std::vector<int>>& target_pitches,
                     const SynthParams& params) {
  if (target_pitches.empty()) throw Error("target pitch list is empty");
  const int count = planted_piece_count(params);
  if (count > static_cast<int>(corpus.pieces.size()))
    throw Error("cannot plant into more pieces than the corpus has");

  // Independent stream so planting does not perturb the noise draws.
  SplitMix64 rng(params.seed ^ 0x706C616E74ULL);

  Corpus out = corpus;
  for (int pi = 0; pi < count; ++pi) {
    Piece& piece = out.pieces[static_cast<std::size_t>(pi)];

    // Distinct onsets, ascending; the plant replaces the last ones.
    std::map<Beat, std::optional<double>> onsets;
    for (const auto& e : piece.events) {
      auto [it, inserted] = onsets.try_emplace(e.onset_score, e.onset_perf);
      if (!inserted && e.onset_perf &&
          (!it->second || *e.onset_perf < *it->second))
        it->second = e.onset_perf;
    }
    if (onsets.size() < target_pitches.size())
      throw Error("piece '" + piece.piece_id + "' has only " +
                  std::to_string(onsets.size()) +
                  " distinct onsets; the pattern needs " +
                  std::to_string(target_pitches.size()));

    std::vector<std::pair<Beat, std::optional<double>>> grid(onsets.begin(),
                                                             onsets.end());
    const std::size_t first =
        grid.size() - target_pitches.size();
    const Beat first_plant = grid[first].first;

    int transpose = 0;
    for (int attempt = 0;; ++attempt) {
      transpose = static_cast<int>(rng.uniform_int(-12, 12));
      bool ok = true;
      for (const auto& chord : target_pitches)
        for (int p : chord)
          if (p + transpose < 0 || p + transpose > 127) ok = false;
      if (ok) break;
      if (attempt > 1000)
        throw Error("cannot transpose the pattern into the pitch range");
    }

    std::vector<NoteEvent> events;
    for (const auto& e : piece.events) {
      if (e.onset_score >= first_plant) continue;
      NoteEvent kept = e;
      // Clip sustains so nothing bleeds into the planted region.
      if (kept.onset_score + kept.duration_score > first_plant)
        kept.duration_score = first_plant - kept.onset_score;
      events.push_back(kept);
    }

    for (std::size_t k = 0; k < target_pitches.size(); ++k) {
      const std::size_t gi = first + k;
      const Beat onset = grid[gi].first;
      const Beat dur = gi + 1 < grid.size()
                           ? grid[gi + 1].first - onset
                           : (gi > 0 ? onset - grid[gi - 1].first : Beat(1));
      for (int p : target_pitches[k]) {
        NoteEvent e;
        e.pitch = p + transpose;
        e.onset_score = onset;
        e.duration_score = dur;
        if (grid[gi].second) {
          e.onset_perf = grid[gi].second;
          double perf_dur = 0.0;
          if (gi + 1 < grid.size() && grid[gi + 1].second)
            perf_dur = *grid[gi + 1].second - *grid[gi].second;
          else if (gi > 0 && grid[gi - 1].second)
            perf_dur = *grid[gi].second - *grid[gi - 1].second;
          e.duration_perf = perf_dur > 0 ? perf_dur : 0.001;
        }
        events.push_back(e);
      }
    }
    std::sort(events.begin(), events.end(), event_less);
    piece.events = std::move(events);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

/// Naive weight computation, duplicated on purpose so the oracle does not
/// route through the production weighting code.
double naive_weight(const WeightScheme& scheme,
                    const std::vector<double>& onsets) {
  if (scheme.kind == WeightKind::kNone) return 1.0;
  std::vector<double> iois;
  for (std::size_t i = 1; i < onsets.size(); ++i)
    iois.push_back(onsets[i] - onsets[i - 1]);
  switch (scheme.kind) {
    case WeightKind::kProximity: {
      double span = 0.0;
      for (double x : iois) span += x;
      return std::exp(-span / scheme.tau);
    }
    case WeightKind::kPeriodicity: {
      if (iois.empty()) return 1.0;
      double lo = iois[0], hi = iois[0];
      for (double x : iois) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      return lo / hi;
    }
    case WeightKind::kResonance: {
      if (iois.empty()) return 1.0;
      double product = 1.0;
      for (double x : iois) {
        const double d = std::log2(x / scheme.p0);
        product *= std::exp(-d * d / (2.0 * scheme.sigma * scheme.sigma));
      }
      return std::pow(product, 1.0 / static_cast<double>(iois.size()));
    }
    default:
      return 1.0;
  }
}

bool tuple_admissible(const EncodedSequence& seq,
                      const std::vector<std::uint32_t>& idx,
                      const SelectionConfig& sel) {
  if (sel.mode == SelectionMode::kFixed) {
    const int skip = static_cast<int>(idx.back() - idx.front() + 1) -
                     static_cast<int>(idx.size());
    return skip <= sel.max_skip;
  }
  if (sel.scope == WindowScope::kPair) {
    for (std::size_t j = 1; j < idx.size(); ++j)
      if (seq.slices[idx[j]].onset_perf - seq.slices[idx[j - 1]].onset_perf >
          sel.window_s)
        return false;
    return true;
  }
  return seq.slices[idx.back()].onset_perf -
             seq.slices[idx.front()].onset_perf <=
         sel.window_s;
}

/// Visits every C(L, n) combination in lexicographic order.
template <typename F>
void all_tuples(std::size_t length, int n, F&& f) {
  if (n < 1 || static_cast<std::size_t>(n) > length) return;
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = static_cast<std::uint32_t>(i);
  while (true) {
    f(idx);
    int pos = n - 1;
    while (pos >= 0 &&
           idx[static_cast<std::size_t>(pos)] ==
               length - static_cast<std::size_t>(n - pos))
      --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < n; ++k)
      idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
}

void oracle_accumulate_length(const EncodedSequence& seq,
                              const SelectionConfig& sel,
                              const WeightScheme& weighting, int n,
                              Distribution& d, bool is_prefix) {
  SelectionConfig level = sel;
  level.n = n;
  all_tuples(seq.size(), n, [&](const std::vector<std::uint32_t>& idx) {
    if (!tuple_admissible(seq, idx, level)) return;
    const NGramType g = ngram_type(seq, idx);
    std::vector<double> onsets;
    if (seq.has_performance)
      for (auto i : idx) onsets.push_back(seq.slices[i].onset_perf);
    else
      onsets.resize(idx.size(), 0.0);
    const double w = naive_weight(weighting, onsets);
    if (is_prefix) {
      d.prefix[g] += w;
      d.total_prefix_weight += w;
    } else {
      auto& entry = d.joint[g];
      entry.weighted_count += w;
      entry.raw_count += 1;
      entry.pieces.insert(seq.piece_id);
      d.total_joint_weight += w;
    }
  });
}

}  // namespace

Distribution oracle_distribution(const Corpus& corpus,
                                 const SelectionConfig& sel,
                                 const WeightScheme& weighting,
                                 bool merge_repeats_flag) {
  Distribution d;
  d.n = sel.n;
  d.fingerprint = make_fingerprint(sel, weighting, merge_repeats_flag);

  std::vector<EncodedSequence> seqs;
  for (const auto& piece : corpus.pieces) {
    SliceSequence slices = full_expand(piece);
    if (merge_repeats_flag) slices = merge_repeats(slices);
    seqs.push_back(encode_sequence(slices));
  }
  std::sort(seqs.begin(), seqs.end(),
            [](const EncodedSequence& a, const EncodedSequence& b) {
              return a.piece_id < b.piece_id;
            });

  for (const auto& seq : seqs) {
    if ((sel.requires_performance() || weighting.requires_performance()) &&
        !seq.has_performance)
      throw Error("piece '" + seq.piece_id +
                  "' lacks performance times required by the configuration");
    oracle_accumulate_length(seq, sel, weighting, sel.n, d, false);
    for (const auto& slice : seq.slices) {
      ++d.unigram[slice.chord];
      ++d.total_unigrams;
    }
    if (sel.n - 1 >= 1)
      oracle_accumulate_length(seq, sel, weighting, sel.n - 1, d, true);
    ++d.piece_count;
  }
  return d;
}

}  // namespace chordgram
