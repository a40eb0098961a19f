#include "chordgram/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "chordgram/expansion.hpp"
#include "chordgram/rng.hpp"

namespace chordgram {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string selection_param_string(const SelectionConfig& sel) {
  char buf[32];
  if (sel.mode == SelectionMode::kFixed)
    std::snprintf(buf, sizeof buf, "%d", sel.max_skip);
  else
    std::snprintf(buf, sizeof buf, "%g", sel.window_s);
  return buf;
}

void check_capabilities(const Corpus& corpus, const SelectionConfig& sel,
                        const WeightScheme& weighting) {
  if (!sel.requires_performance() && !weighting.requires_performance()) return;
  for (const auto& piece : corpus.pieces)
    if (!piece.has_performance())
      throw Error(
          "piece '" + piece.piece_id + "' lacks performance times, but " +
          (sel.requires_performance() ? "variable selection"
                                      : to_string(weighting.kind) +
                                            " weighting") +
          " requires them");
}

/// Seeded K-fold partition: Fisher-Yates over piece indices, round-robin
/// fold assignment.
std::vector<std::vector<std::size_t>> partition_folds(std::size_t pieces,
                                                      int k,
                                                      std::uint64_t seed) {
  std::vector<std::size_t> order(pieces);
  for (std::size_t i = 0; i < pieces; ++i) order[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = pieces; i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < pieces; ++i)
    folds[i % static_cast<std::size_t>(k)].push_back(order[i]);
  return folds;
}

}  // namespace

double reciprocal_rank(std::optional<std::size_t> rank) {
  if (!rank) return 0.0;
  if (*rank < 1) throw Error("rank must be >= 1");
  return 1.0 / static_cast<double>(*rank);
}

std::vector<EncodedSequence> encode_corpus(const Corpus& corpus,
                                           bool merge) {
  std::vector<EncodedSequence> out;
  out.reserve(corpus.pieces.size());
  for (const auto& piece : corpus.pieces) {
    SliceSequence seq = full_expand(piece);
    if (merge) seq = merge_repeats(seq);
    out.push_back(encode_sequence(seq));
  }
  return out;
}

namespace {

/// Distributions shared by every measure of one (selection, weighting) cell.
struct CellDistributions {
  Distribution full;
  std::vector<Distribution> folds;
};

CellDistributions build_cell(const std::vector<EncodedSequence>& seqs,
                             const std::vector<std::vector<std::size_t>>& folds,
                             const SelectionConfig& sel,
                             const WeightScheme& weighting,
                             bool merged_repeats, int threads) {
  CellDistributions cell;
  cell.full = accumulate(seqs, sel, weighting, merged_repeats, threads);
  cell.folds.reserve(folds.size());
  for (const auto& fold : folds) {
    std::vector<EncodedSequence> subset;
    subset.reserve(fold.size());
    for (std::size_t i : fold) subset.push_back(seqs[i]);
    cell.folds.push_back(
        accumulate(subset, sel, weighting, merged_repeats, threads));
  }
  return cell;
}

struct MeasureOutcome {
  std::optional<std::size_t> rank_full;
  double rr_full = 0.0;
  std::vector<FoldResult> per_fold;
  double mrr = 0.0;
  std::size_t table_size = 0;
  RankTable full_table;
};

MeasureOutcome rank_cell(const CellDistributions& cell, Measure measure,
                         const NGramType& target) {
  MeasureOutcome out;
  out.full_table = build_rank_table(cell.full, measure);
  out.table_size = out.full_table.rows.size();
  out.rank_full = rank_of(out.full_table, target);
  out.rr_full = reciprocal_rank(out.rank_full);

  if (cell.folds.empty()) {
    out.per_fold.push_back({0, out.rank_full, out.rr_full});
    out.mrr = out.rr_full;
    return out;
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < cell.folds.size(); ++f) {
    FoldResult fr;
    fr.fold = static_cast<int>(f);
    if (!cell.folds[f].joint.empty()) {
      const RankTable table = build_rank_table(cell.folds[f], measure);
      fr.rank = rank_of(table, target);
    }
    fr.rr = reciprocal_rank(fr.rank);  // absent target scores 0, not skipped
    sum += fr.rr;
    out.per_fold.push_back(fr);
  }
  out.mrr = sum / static_cast<double>(cell.folds.size());
  return out;
}

}  // namespace

EvalResult evaluate(const Corpus& corpus, const ModelConfig& config,
                    const NGramType& target) {
  if (corpus.pieces.empty()) throw Error("corpus has no pieces");
  if (config.folds < 1) throw Error("folds must be >= 1");
  if (config.folds > 1 &&
      static_cast<std::size_t>(config.folds) > corpus.pieces.size())
    throw Error("folds (" + std::to_string(config.folds) +
                ") exceed piece count (" +
                std::to_string(corpus.pieces.size()) + ")");
  if (target.size() != config.selection.n)
    throw Error("target length " + std::to_string(target.size()) +
                " does not match n = " + std::to_string(config.selection.n));
  check_capabilities(corpus, config.selection, config.weighting);

  const auto seqs = encode_corpus(corpus, config.merge_repeats);
  const auto folds =
      config.folds > 1
          ? partition_folds(seqs.size(), config.folds, config.seed)
          : std::vector<std::vector<std::size_t>>{};
  const CellDistributions cell =
      build_cell(seqs, folds, config.selection, config.weighting,
                 config.merge_repeats, config.threads);
  const MeasureOutcome outcome = rank_cell(cell, config.measure, target);

  EvalResult result;
  result.config = config;
  result.rank = outcome.rank_full;
  result.rr = outcome.rr_full;
  result.per_fold = outcome.per_fold;
  result.mrr = outcome.mrr;
  result.table_size = outcome.table_size;
  return result;
}

SweepGrid SweepGrid::defaults(int n) {
  SweepGrid grid;
  for (int t = 0; t <= 4; ++t) {
    SelectionConfig sel;
    sel.n = n;
    sel.mode = SelectionMode::kFixed;
    sel.max_skip = t;
    grid.selections.push_back(sel);
  }
  for (double w : {0.5, 1.0, 1.5, 2.0}) {
    SelectionConfig sel;
    sel.n = n;
    sel.mode = SelectionMode::kVariable;
    sel.window_s = w;
    grid.selections.push_back(sel);
  }
  for (WeightKind kind : {WeightKind::kNone, WeightKind::kProximity,
                          WeightKind::kPeriodicity, WeightKind::kResonance}) {
    WeightScheme scheme;
    scheme.kind = kind;
    grid.weightings.push_back(scheme);
  }
  grid.measures = {Measure::kCount, Measure::kPmi, Measure::kDpmi,
                   Measure::kLpmi, Measure::kPwpmi};
  return grid;
}

SweepReport sweep(const Corpus& corpus, const SweepGrid& grid, int folds,
                  std::uint64_t seed, const NGramType& target,
                  bool merge_repeats, int threads, std::size_t top_n) {
  if (corpus.pieces.empty()) throw Error("corpus has no pieces");
  if (folds < 1) throw Error("folds must be >= 1");
  if (folds > 1 && static_cast<std::size_t>(folds) > corpus.pieces.size())
    throw Error("folds exceed piece count");

  SweepReport report;
  report.n = grid.selections.empty() ? 0 : grid.selections.front().n;
  report.folds = folds;
  report.seed = seed;
  report.merge_repeats = merge_repeats;

  const auto seqs = encode_corpus(corpus, merge_repeats);
  const bool aligned = corpus.has_performance();
  const auto fold_sets =
      folds > 1 ? partition_folds(seqs.size(), folds, seed)
                : std::vector<std::vector<std::size_t>>{};

  const std::size_t groups = grid.selections.size() * grid.weightings.size();
  report.cells.resize(groups * grid.measures.size());

  // One (selection, weighting) group at a time; its five measures reuse the
  // same distributions. Groups are independent jobs.
  const auto run_group = [&](std::size_t group_index) {
    const std::size_t si = group_index / grid.weightings.size();
    const std::size_t wi = group_index % grid.weightings.size();
    const SelectionConfig& sel = grid.selections[si];
    const WeightScheme& weighting = grid.weightings[wi];

    const bool needs_perf =
        sel.requires_performance() || weighting.requires_performance();
    CellDistributions cell;
    std::string status = "ok";
    if (needs_perf && !aligned) {
      status = "skipped: requires a performance-aligned corpus";
    } else {
      cell = build_cell(seqs, fold_sets, sel, weighting, merge_repeats, 1);
    }

    for (std::size_t mi = 0; mi < grid.measures.size(); ++mi) {
      SweepCell out;
      out.selection = sel;
      out.weighting = weighting;
      out.measure = grid.measures[mi];
      out.folds = folds;
      out.ordinal = group_index * grid.measures.size() + mi;
      out.status = status;
      if (status == "ok") {
        const MeasureOutcome outcome =
            rank_cell(cell, grid.measures[mi], target);
        out.rank_full = outcome.rank_full;
        out.rr_full = outcome.rr_full;
        out.mrr = outcome.mrr;
        out.table_size = outcome.table_size;
        if (top_n > 0) {
          const std::size_t limit =
              std::min(top_n, outcome.full_table.rows.size());
          out.top.assign(outcome.full_table.rows.begin(),
                         outcome.full_table.rows.begin() +
                             static_cast<std::ptrdiff_t>(limit));
        }
      }
      report.cells[out.ordinal] = std::move(out);
    }
  };

  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(groups)));
  if (workers <= 1) {
    for (std::size_t gi = 0; gi < groups; ++gi) run_group(gi);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t gi = static_cast<std::size_t>(w); gi < groups;
               gi += static_cast<std::size_t>(workers))
            run_group(gi);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::sort(report.cells.begin(), report.cells.end(),
            [](const SweepCell& a, const SweepCell& b) {
              if (a.mrr != b.mrr) return a.mrr > b.mrr;
              return a.ordinal < b.ordinal;
            });
  return report;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace {

ordered_json config_json(const ModelConfig& config) {
  ordered_json j;
  j["n"] = config.selection.n;
  j["selection"] = to_string(config.selection);
  if (config.selection.mode == SelectionMode::kVariable)
    j["window_scope"] =
        config.selection.scope == WindowScope::kPair ? "pair" : "span";
  j["weighting"] = to_string(config.weighting.kind);
  if (config.weighting.kind == WeightKind::kProximity)
    j["tau"] = config.weighting.tau;
  if (config.weighting.kind == WeightKind::kResonance) {
    j["p0"] = config.weighting.p0;
    j["sigma"] = config.weighting.sigma;
  }
  j["measure"] = to_string(config.measure);
  j["merge_repeats"] = config.merge_repeats;
  j["folds"] = config.folds;
  j["seed"] = config.seed;
  return j;
}

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

void write_eval_json(const EvalResult& result, std::ostream& out) {
  ordered_json j;
  j["config"] = config_json(result.config);
  j["rng"] = "splitmix64";
  if (result.rank)
    j["rank"] = *result.rank;
  else
    j["rank"] = nullptr;
  j["rr"] = result.rr;
  j["per_fold"] = ordered_json::array();
  for (const auto& fr : result.per_fold) {
    ordered_json f;
    f["fold"] = fr.fold;
    if (fr.rank)
      f["rank"] = *fr.rank;
    else
      f["rank"] = nullptr;
    f["rr"] = fr.rr;
    j["per_fold"].push_back(std::move(f));
  }
  j["mrr"] = result.mrr;
  j["table_size"] = result.table_size;
  out << j.dump(2) << "\n";
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "selection,param,weighting,measure,k_folds,rank_full,rr_full,mrr,"
         "table_size,status\n";
  for (const auto& cell : report.cells) {
    out << (cell.selection.mode == SelectionMode::kFixed ? "fixed"
                                                         : "variable")
        << ',' << selection_param_string(cell.selection) << ','
        << to_string(cell.weighting.kind) << ',' << to_string(cell.measure)
        << ',' << cell.folds << ',';
    if (cell.rank_full) out << *cell.rank_full;
    out << ',' << format_double(cell.rr_full) << ',' << format_double(cell.mrr)
        << ',' << cell.table_size << ',' << cell.status << "\n";
  }
}

void write_sweep_json(const SweepReport& report, std::ostream& out) {
  ordered_json j;
  j["n"] = report.n;
  j["k_folds"] = report.folds;
  j["seed"] = report.seed;
  j["rng"] = report.rng;
  j["merge_repeats"] = report.merge_repeats;
  j["mrr_aggregation"] =
      "mean reciprocal rank over a seeded K-fold partition of pieces";
  j["cells"] = ordered_json::array();
  for (const auto& cell : report.cells) {
    ordered_json c;
    c["selection"] =
        cell.selection.mode == SelectionMode::kFixed ? "fixed" : "variable";
    c["param"] = selection_param_string(cell.selection);
    c["weighting"] = to_string(cell.weighting.kind);
    c["measure"] = to_string(cell.measure);
    c["k_folds"] = cell.folds;
    if (cell.rank_full)
      c["rank_full"] = *cell.rank_full;
    else
      c["rank_full"] = nullptr;
    c["rr_full"] = cell.rr_full;
    c["mrr"] = cell.mrr;
    c["table_size"] = cell.table_size;
    c["status"] = cell.status;
    if (!cell.top.empty()) {
      c["top"] = ordered_json::array();
      for (const auto& row : cell.top) c["top"].push_back(rank_row_json(row));
    }
    j["cells"].push_back(std::move(c));
  }
  out << j.dump(2) << "\n";
}

}  // namespace chordgram
