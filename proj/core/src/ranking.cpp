#include "chordgram/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

namespace chordgram {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::kCount: return "count";
    case Measure::kPmi: return "pmi";
    case Measure::kDpmi: return "dpmi";
    case Measure::kLpmi: return "lpmi";
    case Measure::kPwpmi: return "pwpmi";
  }
  return "count";
}

Measure parse_measure(const std::string& text) {
  if (text == "count") return Measure::kCount;
  if (text == "pmi") return Measure::kPmi;
  if (text == "dpmi") return Measure::kDpmi;
  if (text == "lpmi") return Measure::kLpmi;
  if (text == "pwpmi") return Measure::kPwpmi;
  throw Error("unknown measure '" + text +
              "' (expected count|pmi|dpmi|lpmi|pwpmi)");
}

std::string make_fingerprint(const SelectionConfig& sel,
                             const WeightScheme& weighting,
                             bool merged_repeats) {
  std::string fp = "n=" + std::to_string(sel.n) + ";sel=" + to_string(sel);
  if (sel.mode == SelectionMode::kVariable)
    fp += ";scope=" +
          std::string(sel.scope == WindowScope::kPair ? "pair" : "span");
  fp += ";weight=" + to_string(weighting.kind);
  char buf[96];
  switch (weighting.kind) {
    case WeightKind::kProximity:
      std::snprintf(buf, sizeof buf, ";tau=%g", weighting.tau);
      fp += buf;
      break;
    case WeightKind::kResonance:
      std::snprintf(buf, sizeof buf, ";p0=%g;sigma=%g", weighting.p0,
                    weighting.sigma);
      fp += buf;
      break;
    default:
      break;
  }
  fp += merged_repeats ? ";merge_repeats=1" : ";merge_repeats=0";
  return fp;
}

// ---------------------------------------------------------------------------
// Accumulation
// ---------------------------------------------------------------------------

Distribution accumulate_piece(const EncodedSequence& seq,
                              const SelectionConfig& sel,
                              const WeightScheme& weighting,
                              const std::string& fingerprint) {
  if ((sel.requires_performance() || weighting.requires_performance()) &&
      !seq.has_performance)
    throw Error("piece '" + seq.piece_id +
                "' lacks performance times required by the configuration");

  Distribution d;
  d.n = sel.n;
  d.fingerprint = fingerprint;
  d.piece_count = 1;

  double onsets[NGramType::kMaxN];
  const auto instance_weight_at = [&](std::span<const std::uint32_t> idx) {
    for (std::size_t j = 0; j < idx.size(); ++j)
      onsets[j] = seq.slices[idx[j]].onset_perf;
    return instance_weight(weighting,
                           std::span<const double>(onsets, idx.size()));
  };

  for_each_instance(
      seq, sel, [&](std::span<const std::uint32_t> idx, const NGramType& g) {
        const double w = instance_weight_at(idx);
        auto& entry = d.joint[g];
        entry.weighted_count += w;
        entry.raw_count += 1;
        if (entry.pieces.empty()) entry.pieces.insert(seq.piece_id);
        d.total_joint_weight += w;
      });

  for (const auto& slice : seq.slices) {
    ++d.unigram[slice.chord];
    ++d.total_unigrams;
  }

  // Same selection and weighting, one element shorter. Length-1 grams have
  // no gaps and no IOIs, so every slice qualifies with weight 1.
  SelectionConfig prefix_sel = sel;
  prefix_sel.n = sel.n - 1;
  if (prefix_sel.n >= 1) {
    for_each_instance(
        seq, prefix_sel,
        [&](std::span<const std::uint32_t> idx, const NGramType& g) {
          const double w = instance_weight_at(idx);
          d.prefix[g] += w;
          d.total_prefix_weight += w;
        });
  }
  return d;
}

namespace {

void merge_into(Distribution& acc, const Distribution& d) {
  if (acc.fingerprint != d.fingerprint || acc.n != d.n)
    throw Error("cannot merge distributions with different configurations ('" +
                acc.fingerprint + "' vs '" + d.fingerprint + "')");
  for (const auto& [g, entry] : d.joint) {
    auto& target = acc.joint[g];
    target.weighted_count += entry.weighted_count;
    target.raw_count += entry.raw_count;
    target.pieces.insert(entry.pieces.begin(), entry.pieces.end());
  }
  for (const auto& [c, count] : d.unigram) acc.unigram[c] += count;
  for (const auto& [g, w] : d.prefix) acc.prefix[g] += w;
  acc.total_joint_weight += d.total_joint_weight;
  acc.total_unigrams += d.total_unigrams;
  acc.total_prefix_weight += d.total_prefix_weight;
  acc.piece_count += d.piece_count;
}

}  // namespace

Distribution accumulate(const std::vector<EncodedSequence>& seqs,
                        const SelectionConfig& sel,
                        const WeightScheme& weighting, bool merged_repeats,
                        int threads) {
  const std::string fp = make_fingerprint(sel, weighting, merged_repeats);

  // Subtotals are merged in ascending piece_id order no matter how many
  // workers computed them, so float sums never depend on scheduling.
  std::vector<std::size_t> order(seqs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seqs[a].piece_id < seqs[b].piece_id;
  });

  std::vector<Distribution> parts(seqs.size());
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(seqs.size())));
  if (workers <= 1) {
    for (std::size_t i : order)
      parts[i] = accumulate_piece(seqs[i], sel, weighting, fp);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < seqs.size();
               i += static_cast<std::size_t>(workers))
            parts[i] = accumulate_piece(seqs[i], sel, weighting, fp);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  Distribution total;
  total.n = sel.n;
  total.fingerprint = fp;
  for (std::size_t i : order) merge_into(total, parts[i]);
  return total;
}

Distribution merge(const Distribution& a, const Distribution& b) {
  if (a.fingerprint.empty() && a.joint.empty() && a.piece_count == 0) {
    return b;  // empty identity
  }
  if (b.fingerprint.empty() && b.joint.empty() && b.piece_count == 0) {
    return a;
  }
  Distribution out = a;
  merge_into(out, b);
  return out;
}

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

namespace {

const JointEntry& joint_entry(const Distribution& d, const NGramType& g) {
  const auto it = d.joint.find(g);
  if (it == d.joint.end())
    throw Error("type " + format_pattern(g) + " absent from distribution");
  return it->second;
}

double unigram_prob(const Distribution& d, ChordType c) {
  const auto it = d.unigram.find(c);
  if (it == d.unigram.end() || d.total_unigrams == 0)
    throw Error("chord type of a joint entry missing from unigram marginals");
  return static_cast<double>(it->second) /
         static_cast<double>(d.total_unigrams);
}

}  // namespace

double score_pmi(const Distribution& d, const NGramType& g) {
  const auto& entry = joint_entry(d, g);
  const double p_joint = entry.weighted_count / d.total_joint_weight;
  double denom = 1.0;
  for (int i = 0; i < g.size(); ++i) denom *= unigram_prob(d, g.chord_at(i));
  return std::log2(p_joint / denom);
}

double score_dpmi(const Distribution& d, const NGramType& g) {
  const auto& entry = joint_entry(d, g);
  const auto prefix_it = d.prefix.find(g.prefix());
  if (prefix_it == d.prefix.end())
    throw Error("prefix of " + format_pattern(g) +
                " absent from the prefix distribution");
  const double p_joint = entry.weighted_count / d.total_joint_weight;
  const double p_prefix = prefix_it->second / d.total_prefix_weight;
  const double p_last = unigram_prob(d, g.chord_at(g.size() - 1));
  return std::log2(p_joint / (p_prefix * p_last));
}

double score_lpmi(const Distribution& d, const NGramType& g) {
  return joint_entry(d, g).weighted_count * score_pmi(d, g);
}

double score_pwpmi(const Distribution& d, const NGramType& g) {
  return static_cast<double>(joint_entry(d, g).pieces.size()) *
         score_pmi(d, g);
}

double score(const Distribution& d, const NGramType& g, Measure m) {
  switch (m) {
    case Measure::kCount: return joint_entry(d, g).weighted_count;
    case Measure::kPmi: return score_pmi(d, g);
    case Measure::kDpmi: return score_dpmi(d, g);
    case Measure::kLpmi: return score_lpmi(d, g);
    case Measure::kPwpmi: return score_pwpmi(d, g);
  }
  throw Error("unknown measure");
}

// ---------------------------------------------------------------------------
// Rank tables
// ---------------------------------------------------------------------------

RankTable build_rank_table(const Distribution& d, Measure m) {
  if (d.joint.empty()) throw Error("cannot rank an empty distribution");
  RankTable table;
  table.measure = m;
  table.rows.reserve(d.joint.size());
  for (const auto& [g, entry] : d.joint) {
    RankRow row;
    row.type = g;
    row.pattern = format_pattern(g);
    row.score = score(d, g, m);
    row.weighted_count = entry.weighted_count;
    row.raw_count = entry.raw_count;
    row.piece_count = entry.pieces.size();
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const RankRow& a, const RankRow& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.weighted_count != b.weighted_count)
                return a.weighted_count > b.weighted_count;
              return a.pattern < b.pattern;
            });
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    table.rows[i].rank = i + 1;
  return table;
}

std::optional<std::size_t> rank_of(const RankTable& table,
                                   const NGramType& g) {
  for (const auto& row : table.rows)
    if (row.type == g) return row.rank;
  return std::nullopt;
}

void write_rank_table_csv(const RankTable& table, std::ostream& out,
                          std::size_t top) {
  out << "rank,pattern,score,weighted_count,raw_count,piece_count\n";
  const std::size_t limit =
      top == 0 ? table.rows.size() : std::min(top, table.rows.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& row = table.rows[i];
    out << row.rank << ',' << row.pattern << ',' << format_double(row.score)
        << ',' << format_double(row.weighted_count) << ',' << row.raw_count
        << ',' << row.piece_count << "\n";
  }
}

namespace {

ordered_json rank_row_json(const RankRow& row) {
  ordered_json r;
  r["rank"] = row.rank;
  r["pattern"] = row.pattern;
  r["score"] = row.score;
  r["weighted_count"] = row.weighted_count;
  r["raw_count"] = row.raw_count;
  r["piece_count"] = row.piece_count;
  return r;
}

}  // namespace

void write_rank_table_json(const RankTable& table, std::ostream& out,
                           std::size_t top) {
  ordered_json j;
  j["measure"] = to_string(table.measure);
  j["rows"] = ordered_json::array();
  const std::size_t limit =
      top == 0 ? table.rows.size() : std::min(top, table.rows.size());
  for (std::size_t i = 0; i < limit; ++i)
    j["rows"].push_back(rank_row_json(table.rows[i]));
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Distribution files
// ---------------------------------------------------------------------------

void write_distribution_json(const Distribution& d, std::ostream& out) {
  ordered_json j;
  j["format"] = "chordgram-distribution";
  j["version"] = 1;
  j["n"] = d.n;
  j["fingerprint"] = d.fingerprint;
  j["piece_count"] = d.piece_count;
  j["total_joint_weight"] = d.total_joint_weight;
  j["total_unigrams"] = d.total_unigrams;
  j["total_prefix_weight"] = d.total_prefix_weight;

  // Sorted by pattern text for deterministic files.
  std::map<std::string, const JointEntry*> joint_sorted;
  for (const auto& [g, entry] : d.joint)
    joint_sorted.emplace(format_pattern(g), &entry);
  j["joint"] = ordered_json::array();
  for (const auto& [pattern, entry] : joint_sorted) {
    ordered_json e;
    e["pattern"] = pattern;
    e["weighted"] = entry->weighted_count;
    e["raw"] = entry->raw_count;
    e["pieces"] = std::vector<std::string>(entry->pieces.begin(),
                                           entry->pieces.end());
    j["joint"].push_back(std::move(e));
  }

  std::map<std::string, std::uint64_t> unigram_sorted;
  for (const auto& [c, count] : d.unigram) {
    NGramType g;
    g.push_initial(c);
    unigram_sorted.emplace(format_pattern(g), count);
  }
  j["unigram"] = ordered_json::array();
  for (const auto& [pattern, count] : unigram_sorted) {
    ordered_json e;
    e["chord"] = pattern;
    e["count"] = count;
    j["unigram"].push_back(std::move(e));
  }

  std::map<std::string, double> prefix_sorted;
  for (const auto& [g, w] : d.prefix)
    prefix_sorted.emplace(format_pattern(g), w);
  j["prefix"] = ordered_json::array();
  for (const auto& [pattern, w] : prefix_sorted) {
    ordered_json e;
    e["pattern"] = pattern;
    e["weighted"] = w;
    j["prefix"].push_back(std::move(e));
  }

  out << j.dump(2) << "\n";
}

Distribution read_distribution_json(std::istream& in) {
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed distribution file: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "chordgram-distribution")
    throw Error("not a chordgram distribution file");

  Distribution d;
  d.n = j.at("n").get<int>();
  d.fingerprint = j.at("fingerprint").get<std::string>();
  d.piece_count = j.at("piece_count").get<std::uint64_t>();
  d.total_joint_weight = j.at("total_joint_weight").get<double>();
  d.total_unigrams = j.at("total_unigrams").get<std::uint64_t>();
  d.total_prefix_weight = j.at("total_prefix_weight").get<double>();

  for (const auto& e : j.at("joint")) {
    const NGramType g = parse_pattern(e.at("pattern").get<std::string>());
    JointEntry entry;
    entry.weighted_count = e.at("weighted").get<double>();
    entry.raw_count = e.at("raw").get<std::uint64_t>();
    for (const auto& p : e.at("pieces"))
      entry.pieces.insert(p.get<std::string>());
    d.joint.emplace(g, std::move(entry));
  }
  for (const auto& e : j.at("unigram")) {
    const NGramType g = parse_pattern(e.at("chord").get<std::string>());
    d.unigram.emplace(g.chord_at(0), e.at("count").get<std::uint64_t>());
  }
  for (const auto& e : j.at("prefix")) {
    const NGramType g = parse_pattern(e.at("pattern").get<std::string>());
    d.prefix.emplace(g, e.at("weighted").get<double>());
  }
  return d;
}

}  // namespace chordgram
