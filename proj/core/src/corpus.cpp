#include "chordgram/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chordgram {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Beat make_beat(std::int64_t num, std::int64_t den, std::size_t line,
               const char* what) {
  if (den <= 0)
    throw ParseError(line, std::string(what) + ": denominator must be > 0");
  return Beat(num, den);
}

void check_event(const NoteEvent& e, std::size_t line) {
  if (e.pitch < 0 || e.pitch > 127)
    throw ParseError(line, "pitch " + std::to_string(e.pitch) +
                               " out of range 0..127 (field pitch)");
  if (e.duration_score <= Beat(0))
    throw ParseError(line, "duration_score must be > 0");
  if (e.onset_score < Beat(0))
    throw ParseError(line, "onset_score must be >= 0");
  if (e.onset_perf.has_value() != e.duration_perf.has_value())
    throw ParseError(line,
                     "onset_s and dur_s must be both present or both absent");
  if (e.onset_perf && *e.onset_perf < 0)
    throw ParseError(line, "onset_s must be >= 0");
  if (e.duration_perf && *e.duration_perf <= 0)
    throw ParseError(line, "dur_s must be > 0");
}

std::int64_t get_int(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(line, std::string("missing field ") + key);
  if (!it->is_number_integer())
    throw ParseError(line, std::string("field ") + key +
                               " must be an integer");
  return it->get<std::int64_t>();
}

NoteEvent parse_jsonl_event(const std::string& text, std::string& piece_id,
                            std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line, "event must be a JSON object");

  auto id_it = j.find("piece_id");
  if (id_it == j.end() || !id_it->is_string())
    throw ParseError(line, "missing string field piece_id");
  piece_id = id_it->get<std::string>();
  if (piece_id.empty()) throw ParseError(line, "piece_id must be nonempty");

  NoteEvent e;
  e.pitch = static_cast<int>(get_int(j, "pitch", line));
  e.onset_score = make_beat(get_int(j, "onset_num", line),
                            get_int(j, "onset_den", line), line, "onset");
  e.duration_score = make_beat(get_int(j, "dur_num", line),
                               get_int(j, "dur_den", line), line, "duration");
  const bool has_onset_s = j.contains("onset_s") && !j["onset_s"].is_null();
  const bool has_dur_s = j.contains("dur_s") && !j["dur_s"].is_null();
  if (has_onset_s) e.onset_perf = j["onset_s"].get<double>();
  if (has_dur_s) e.duration_perf = j["dur_s"].get<double>();
  check_event(e, line);
  return e;
}

constexpr const char* kCsvHeader =
    "piece_id,pitch,onset_num,onset_den,dur_num,dur_den,onset_s,dur_s";

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::int64_t parse_int_field(const std::string& s, const char* what,
                             std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, std::string("field ") + what +
                               ": not an integer: '" + s + "'");
  return value;
}

double parse_float_field(const std::string& s, const char* what,
                         std::size_t line) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("field ") + what +
                               ": not a number: '" + s + "'");
  }
}

NoteEvent parse_csv_event(const std::string& text, std::string& piece_id,
                          std::size_t line) {
  const auto fields = split_csv(text);
  if (fields.size() != 8)
    throw ParseError(line, "expected 8 CSV fields, got " +
                               std::to_string(fields.size()));
  piece_id = fields[0];
  if (piece_id.empty()) throw ParseError(line, "piece_id must be nonempty");

  NoteEvent e;
  e.pitch = static_cast<int>(parse_int_field(fields[1], "pitch", line));
  e.onset_score =
      make_beat(parse_int_field(fields[2], "onset_num", line),
                parse_int_field(fields[3], "onset_den", line), line, "onset");
  e.duration_score =
      make_beat(parse_int_field(fields[4], "dur_num", line),
                parse_int_field(fields[5], "dur_den", line), line, "duration");
  if (!fields[6].empty())
    e.onset_perf = parse_float_field(fields[6], "onset_s", line);
  if (!fields[7].empty())
    e.duration_perf = parse_float_field(fields[7], "dur_s", line);
  check_event(e, line);
  return e;
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

bool Corpus::has_performance() const {
  return !pieces.empty() &&
         std::all_of(pieces.begin(), pieces.end(),
                     [](const Piece& p) { return p.has_performance(); });
}

bool event_less(const NoteEvent& a, const NoteEvent& b) {
  if (a.onset_score != b.onset_score) return a.onset_score < b.onset_score;
  if (a.pitch != b.pitch) return a.pitch < b.pitch;
  if (a.duration_score != b.duration_score)
    return a.duration_score < b.duration_score;
  if (a.onset_perf != b.onset_perf) return a.onset_perf < b.onset_perf;
  return a.duration_perf < b.duration_perf;
}

Corpus parse_corpus(std::istream& in, CorpusFormat format) {
  // Grouped by piece_id in first-appearance order; line order is otherwise
  // irrelevant because events get a content-determined sort.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<NoteEvent, std::size_t>>> groups;

  std::string linetext;
  std::size_t line = 0;
  bool saw_header = false;
  while (std::getline(in, linetext)) {
    ++line;
    linetext = trim_cr(linetext);
    if (format == CorpusFormat::kCsv && !saw_header) {
      if (linetext != kCsvHeader)
        throw ParseError(line, std::string("expected CSV header '") +
                                   kCsvHeader + "'");
      saw_header = true;
      continue;
    }
    if (linetext.empty()) continue;

    std::string piece_id;
    NoteEvent e = format == CorpusFormat::kJsonl
                      ? parse_jsonl_event(linetext, piece_id, line)
                      : parse_csv_event(linetext, piece_id, line);
    auto [it, inserted] = groups.try_emplace(piece_id);
    if (inserted) order.push_back(piece_id);
    it->second.emplace_back(std::move(e), line);
  }

  Corpus corpus;
  corpus.pieces.reserve(order.size());
  for (const auto& id : order) {
    auto& group = groups[id];
    const bool first_has_perf = group.front().first.has_performance();
    for (const auto& [event, event_line] : group) {
      if (event.has_performance() != first_has_perf)
        throw ParseError(event_line,
                         "piece '" + id +
                             "' mixes events with and without "
                             "performance times");
    }
    Piece piece;
    piece.piece_id = id;
    piece.events.reserve(group.size());
    for (auto& [event, event_line] : group) piece.events.push_back(event);
    std::sort(piece.events.begin(), piece.events.end(), event_less);
    corpus.pieces.push_back(std::move(piece));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  return parse_corpus(in, csv ? CorpusFormat::kCsv : CorpusFormat::kJsonl);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out,
                      CorpusFormat format) {
  if (format == CorpusFormat::kCsv) out << kCsvHeader << "\n";
  for (const auto& piece : corpus.pieces) {
    for (const auto& e : piece.events) {
      if (format == CorpusFormat::kJsonl) {
        ordered_json j;
        j["piece_id"] = piece.piece_id;
        j["pitch"] = e.pitch;
        j["onset_num"] = e.onset_score.numerator();
        j["onset_den"] = e.onset_score.denominator();
        j["dur_num"] = e.duration_score.numerator();
        j["dur_den"] = e.duration_score.denominator();
        if (e.onset_perf) {
          j["onset_s"] = *e.onset_perf;
          j["dur_s"] = *e.duration_perf;
        }
        out << j.dump() << "\n";
      } else {
        out << piece.piece_id << ',' << e.pitch << ','
            << e.onset_score.numerator() << ',' << e.onset_score.denominator()
            << ',' << e.duration_score.numerator() << ','
            << e.duration_score.denominator() << ',';
        if (e.onset_perf) {
          // Shortest round-trip formatting, same as the JSON writer.
          out << json(*e.onset_perf).dump() << ','
              << json(*e.duration_perf).dump();
        } else {
          out << ',';
        }
        out << "\n";
      }
    }
  }
}

std::size_t ValidationReport::violation_count() const {
  std::size_t count = corpus_violations.size();
  for (const auto& p : pieces) count += p.violations.size();
  return count;
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;

  std::map<std::string, int> id_seen;
  for (const auto& piece : corpus.pieces) ++id_seen[piece.piece_id];
  for (const auto& [id, count] : id_seen)
    if (count > 1)
      report.corpus_violations.push_back("duplicate piece_id '" + id + "' (" +
                                         std::to_string(count) + " pieces)");

  for (const auto& piece : corpus.pieces) {
    PieceValidation pv;
    pv.piece_id = piece.piece_id;
    pv.event_count = piece.events.size();
    pv.performance_aligned = piece.has_performance();

    if (piece.piece_id.empty())
      pv.violations.push_back("empty piece_id");
    if (piece.events.empty()) {
      pv.violations.push_back("piece has no events");
      report.pieces.push_back(std::move(pv));
      continue;
    }

    pv.span_begin = piece.events.front().onset_score;
    pv.span_end = piece.events.front().onset_score +
                  piece.events.front().duration_score;
    bool uniform_perf = true;
    for (std::size_t i = 0; i < piece.events.size(); ++i) {
      const auto& e = piece.events[i];
      pv.span_begin = std::min(pv.span_begin, e.onset_score);
      pv.span_end = std::max(pv.span_end, e.onset_score + e.duration_score);
      if (e.pitch < 0 || e.pitch > 127)
        pv.violations.push_back("event " + std::to_string(i) +
                                ": pitch out of range");
      if (e.duration_score <= Beat(0))
        pv.violations.push_back("event " + std::to_string(i) +
                                ": nonpositive score duration");
      if (e.onset_perf.has_value() != e.duration_perf.has_value())
        pv.violations.push_back("event " + std::to_string(i) +
                                ": one performance field without the other");
      if (e.duration_perf && *e.duration_perf <= 0)
        pv.violations.push_back("event " + std::to_string(i) +
                                ": nonpositive performance duration");
      if (e.has_performance() != pv.performance_aligned) uniform_perf = false;
      if (i > 0 && event_less(e, piece.events[i - 1]))
        pv.violations.push_back("event " + std::to_string(i) +
                                ": events not sorted");
    }
    if (!uniform_perf)
      pv.violations.push_back(
          "mixed presence/absence of performance times across events");

    if (pv.performance_aligned && uniform_perf) {
      // Monotone alignment: a later score onset may never have an earlier
      // performance onset. Events are sorted by score onset already.
      for (std::size_t i = 1; i < piece.events.size(); ++i) {
        const auto& prev = piece.events[i - 1];
        const auto& cur = piece.events[i];
        if (prev.onset_score < cur.onset_score &&
            *prev.onset_perf > *cur.onset_perf) {
          pv.violations.push_back(
              "monotone alignment violated between events " +
              std::to_string(i - 1) + " and " + std::to_string(i) +
              " (score onsets " + to_string(prev.onset_score) + " < " +
              to_string(cur.onset_score) + " but performance onsets " +
              std::to_string(*prev.onset_perf) + " > " +
              std::to_string(*cur.onset_perf) + ")");
        }
      }
    }
    report.pieces.push_back(std::move(pv));
  }
  return report;
}

void write_validation_text(const ValidationReport& report, std::ostream& out) {
  out << report.pieces.size() << " pieces, " << report.violation_count()
      << " violations\n";
  for (const auto& v : report.corpus_violations) out << "corpus: " << v << "\n";
  for (const auto& pv : report.pieces) {
    out << pv.piece_id << ": " << pv.event_count << " events, span "
        << to_string(pv.span_begin) << ".." << to_string(pv.span_end)
        << (pv.performance_aligned ? ", performance-aligned" : ", score-only")
        << "\n";
    for (const auto& v : pv.violations) out << "  violation: " << v << "\n";
  }
}

void write_validation_json(const ValidationReport& report, std::ostream& out) {
  ordered_json j;
  j["piece_count"] = report.pieces.size();
  j["violation_count"] = report.violation_count();
  j["corpus_violations"] = report.corpus_violations;
  j["pieces"] = ordered_json::array();
  for (const auto& pv : report.pieces) {
    ordered_json p;
    p["piece_id"] = pv.piece_id;
    p["event_count"] = pv.event_count;
    p["span_begin"] = to_string(pv.span_begin);
    p["span_end"] = to_string(pv.span_end);
    p["performance_aligned"] = pv.performance_aligned;
    p["violations"] = pv.violations;
    j["pieces"].push_back(std::move(p));
  }
  out << j.dump(2) << "\n";
}

Piece transpose_piece(const Piece& piece, int semitones) {
  Piece out = piece;
  for (auto& e : out.events) {
    const int shifted = e.pitch + semitones;
    if (shifted < 0 || shifted > 127)
      throw Error("transposition by " + std::to_string(semitones) +
                  " moves pitch " + std::to_string(e.pitch) +
                  " outside 0..127");
    e.pitch = shifted;
  }
  return out;
}

}  // namespace chordgram
