#ifndef CHORDGRAM_CORPUS_HPP
#define CHORDGRAM_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chordgram/beat.hpp"
#include "chordgram/error.hpp"

namespace chordgram {

/// One note. Score times are exact beats; performance times, when the piece
/// is aligned to a recording, are seconds. The two performance fields are
/// either both present or both absent.
struct NoteEvent {
  int pitch = 0;  // MIDI number, 0..127
  Beat onset_score{0};
  Beat duration_score{1};
  std::optional<double> onset_perf;
  std::optional<double> duration_perf;

  bool has_performance() const { return onset_perf.has_value(); }
  bool operator==(const NoteEvent&) const = default;
};

/// Events of one piece, sorted by (onset_score, pitch, ...). Duplicate
/// identical events are legal: unison doublings are real in polyphony.
struct Piece {
  std::string piece_id;
  std::vector<NoteEvent> events;

  bool has_performance() const {
    return !events.empty() && events.front().has_performance();
  }
  bool operator==(const Piece&) const = default;
};

struct Corpus {
  std::vector<Piece> pieces;

  bool has_performance() const;
  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { kJsonl, kCsv };

/// Deterministic full ordering used for events within a piece.
bool event_less(const NoteEvent& a, const NoteEvent& b);

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------
//
// JSONL: one event per line with keys piece_id, pitch, onset_num, onset_den,
// dur_num, dur_den and optional onset_s, dur_s.
// CSV: fixed header piece_id,pitch,onset_num,onset_den,dur_num,dur_den,
// onset_s,dur_s; empty string in the last two columns means absent.

Corpus parse_corpus(std::istream& in, CorpusFormat format);

/// Reads a corpus file, inferring the format from the extension
/// (".csv" means CSV, anything else JSONL).
Corpus load_corpus(const std::string& path);

void serialize_corpus(const Corpus& corpus, std::ostream& out,
                      CorpusFormat format);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct PieceValidation {
  std::string piece_id;
  std::size_t event_count = 0;
  Beat span_begin{0};
  Beat span_end{0};
  bool performance_aligned = false;
  std::vector<std::string> violations;
};

/// Never throws; collects violations instead. A report with zero violations
/// means every piece invariant holds.
struct ValidationReport {
  std::vector<PieceValidation> pieces;
  std::vector<std::string> corpus_violations;

  std::size_t violation_count() const;
  bool ok() const { return violation_count() == 0; }
};

ValidationReport validate_corpus(const Corpus& corpus);

void write_validation_text(const ValidationReport& report, std::ostream& out);
void write_validation_json(const ValidationReport& report, std::ostream& out);

// ---------------------------------------------------------------------------
// Transposition
// ---------------------------------------------------------------------------

/// Shifts every pitch by `semitones`; timings untouched. Throws Error if any
/// resulting pitch falls outside 0..127.
Piece transpose_piece(const Piece& piece, int semitones);

}  // namespace chordgram

#endif  // CHORDGRAM_CORPUS_HPP
