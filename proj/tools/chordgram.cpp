// Command-line front end: validate, expand, mine, rank, eval, sweep, synth.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chordgram/digest.hpp"
#include "chordgram/evaluation.hpp"
#include "chordgram/expansion.hpp"
#include "chordgram/ranking.hpp"
#include "chordgram/rng.hpp"
#include "chordgram/synth.hpp"
#include "chordgram/version.hpp"

namespace {

using chordgram::Error;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

/// Every report is accompanied by a manifest sufficient to reproduce it:
/// tool version, effective config, corpus digest, seed, and output paths.
/// The timestamp is informational and excluded from any digest.
void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const ordered_json& config,
                    const std::optional<std::string>& corpus_path,
                    std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& outputs) {
  ordered_json j;
  j["tool"] = "chordgram";
  j["version"] = chordgram::kVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  if (corpus_path) {
    j["corpus"] = *corpus_path;
    j["corpus_digest"] = chordgram::digest_file(*corpus_path);
  }
  if (seed) j["seed"] = *seed;
  j["rng"] = chordgram::SplitMix64::name();
  j["timestamp"] = iso_timestamp();
  j["outputs"] = outputs;

  const std::string path = out_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write output file: " + path);
  return out;
}

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct CorpusArgs {
  std::string path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", path, "Corpus file (JSONL, or CSV by extension)")
        ->required();
  }
  chordgram::Corpus load() const { return chordgram::load_corpus(path); }
};

struct MiningArgs {
  int n = 4;
  std::string selection = "fixed:0";
  std::string scope = "pair";
  std::string weighting = "none";
  double tau = 1.0;
  double p0 = 0.5;
  double sigma = 1.0;
  bool merge_repeats = false;
  int threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "Pattern length (number of sonorities)")
        ->check(CLI::Range(2, chordgram::NGramType::kMaxN));
    cmd->add_option("--selection", selection,
                    "fixed:<skips> or variable:<seconds>");
    cmd->add_option("--window-scope", scope,
                    "Variable-window scope: pair or span")
        ->check(CLI::IsMember({"pair", "span"}));
    cmd->add_option("--weighting", weighting,
                    "none|proximity|periodicity|resonance");
    cmd->add_option("--tau", tau, "Proximity decay constant (seconds)");
    cmd->add_option("--p0", p0, "Resonance peak period (seconds)");
    cmd->add_option("--sigma", sigma, "Resonance width (octaves)");
    cmd->add_flag("--merge-repeats", merge_repeats,
                  "Merge consecutive slices with equal pitch-class content");
    cmd->add_option("--threads", threads, "Worker threads")
        ->check(CLI::Range(1, 256));
  }

  chordgram::SelectionConfig make_selection() const {
    auto sel = chordgram::parse_selection(selection, n);
    sel.scope = scope == "span" ? chordgram::WindowScope::kSpan
                                : chordgram::WindowScope::kPair;
    return sel;
  }
  chordgram::WeightScheme make_weighting() const {
    chordgram::WeightScheme scheme;
    scheme.kind = chordgram::parse_weight_kind(weighting);
    scheme.tau = tau;
    scheme.p0 = p0;
    scheme.sigma = sigma;
    if (scheme.tau <= 0) throw Error("tau must be > 0");
    if (scheme.p0 <= 0) throw Error("p0 must be > 0");
    if (scheme.sigma <= 0) throw Error("sigma must be > 0");
    return scheme;
  }
  ordered_json config_json() const {
    ordered_json j;
    j["n"] = n;
    j["selection"] = selection;
    j["window_scope"] = scope;
    j["weighting"] = weighting;
    j["tau"] = tau;
    j["p0"] = p0;
    j["sigma"] = sigma;
    j["merge_repeats"] = merge_repeats;
    j["threads"] = threads;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct ValidateCmd {
  CorpusArgs corpus;
  std::string format = "text";

  int run() const {
    const auto report = chordgram::validate_corpus(corpus.load());
    if (format == "json")
      chordgram::write_validation_json(report, std::cout);
    else
      chordgram::write_validation_text(report, std::cout);
    if (!report.ok()) {
      std::cerr << "validation failed: " << report.violation_count()
                << " violation(s)\n";
      return kExitData;
    }
    return kExitOk;
  }
};

struct ExpandCmd {
  CorpusArgs corpus;
  std::string out_path;
  bool merge = false;

  int run() const {
    const auto loaded = corpus.load();
    auto out = open_output(out_path);
    for (const auto& piece : loaded.pieces) {
      chordgram::SliceSequence seq = chordgram::full_expand(piece);
      if (merge) seq = chordgram::merge_repeats(seq);
      for (const auto& slice : seq.slices) {
        ordered_json j;
        j["piece_id"] = seq.piece_id;
        j["onset_num"] = slice.onset_score.numerator();
        j["onset_den"] = slice.onset_score.denominator();
        if (slice.onset_perf)
          j["onset_s"] = *slice.onset_perf;
        else
          j["onset_s"] = nullptr;
        j["pitches"] = slice.pitches;
        out << j.dump() << "\n";
      }
    }
    return kExitOk;
  }
};

struct MineCmd {
  CorpusArgs corpus;
  MiningArgs mining;
  std::string out_path;
  std::string dump_instances;

  int run() const {
    const auto loaded = corpus.load();
    const auto sel = mining.make_selection();
    const auto weighting = mining.make_weighting();
    const auto seqs = chordgram::encode_corpus(loaded, mining.merge_repeats);

    if ((sel.requires_performance() || weighting.requires_performance()) &&
        !loaded.has_performance())
      throw Error(
          "corpus lacks performance times (onset_s/dur_s) required by " +
          std::string(sel.requires_performance() ? "variable selection"
                                                 : "the weighting scheme"));

    const auto dist = chordgram::accumulate(seqs, sel, weighting,
                                            mining.merge_repeats,
                                            mining.threads);
    {
      auto out = open_output(out_path);
      chordgram::write_distribution_json(dist, out);
    }

    if (!dump_instances.empty()) {
      auto dump = open_output(dump_instances);
      for (const auto& seq : seqs) {
        for (const auto& inst : chordgram::enumerate_instances(seq, sel)) {
          ordered_json j;
          j["piece_id"] = inst.piece_id;
          j["indices"] = inst.indices;
          if (!inst.onsets_perf.empty()) j["onsets_s"] = inst.onsets_perf;
          j["pattern"] = chordgram::format_pattern(inst.type);
          dump << j.dump() << "\n";
        }
      }
    }

    std::vector<std::string> outputs = {out_path};
    if (!dump_instances.empty()) outputs.push_back(dump_instances);
    write_manifest(out_path, "mine", mining.config_json(), corpus.path,
                   std::nullopt, outputs);
    return kExitOk;
  }
};

struct RankCmd {
  std::string dist_path;
  std::string measure = "pwpmi";
  std::size_t top = 0;
  std::string out_path;
  std::string format = "csv";

  int run() const {
    std::ifstream in(dist_path);
    if (!in) throw Error("cannot open distribution file: " + dist_path);
    const auto dist = chordgram::read_distribution_json(in);
    const auto table =
        chordgram::build_rank_table(dist, chordgram::parse_measure(measure));

    const auto emit = [&](std::ostream& out) {
      if (format == "json")
        chordgram::write_rank_table_json(table, out, top);
      else
        chordgram::write_rank_table_csv(table, out, top);
    };
    if (out_path.empty()) {
      emit(std::cout);
    } else {
      auto out = open_output(out_path);
      emit(out);
      ordered_json config;
      config["dist"] = dist_path;
      config["measure"] = measure;
      config["top"] = top;
      config["format"] = format;
      write_manifest(out_path, "rank", config, std::nullopt, std::nullopt,
                     {out_path});
    }
    return kExitOk;
  }
};

struct EvalCmd {
  CorpusArgs corpus;
  MiningArgs mining;
  std::string measure = "pwpmi";
  std::string target = chordgram::kCadenceTargetName;
  int folds = 10;
  std::uint64_t seed = 0;
  std::string out_path;

  int run() const {
    chordgram::ModelConfig config;
    config.selection = mining.make_selection();
    config.weighting = mining.make_weighting();
    config.measure = chordgram::parse_measure(measure);
    config.merge_repeats = mining.merge_repeats;
    config.folds = folds;
    config.seed = seed;
    config.threads = mining.threads;

    const auto result = chordgram::evaluate(corpus.load(), config,
                                            chordgram::resolve_target(target));
    if (out_path.empty()) {
      chordgram::write_eval_json(result, std::cout);
    } else {
      auto out = open_output(out_path);
      chordgram::write_eval_json(result, out);
      ordered_json cfg = mining.config_json();
      cfg["measure"] = measure;
      cfg["target"] = target;
      cfg["folds"] = folds;
      write_manifest(out_path, "eval", cfg, corpus.path, seed, {out_path});
    }
    return kExitOk;
  }
};

struct SweepCmd {
  CorpusArgs corpus;
  int n = 4;
  std::string target = chordgram::kCadenceTargetName;
  int folds = 10;
  std::uint64_t seed = 0;
  bool merge_repeats = false;
  int threads = 1;
  std::size_t top = 0;
  std::string out_path;
  std::string format = "csv";

  int run() const {
    const auto grid = chordgram::SweepGrid::defaults(n);
    const auto report =
        chordgram::sweep(corpus.load(), grid, folds, seed,
                         chordgram::resolve_target(target), merge_repeats,
                         threads, top);
    const auto emit = [&](std::ostream& out) {
      if (format == "json")
        chordgram::write_sweep_json(report, out);
      else
        chordgram::write_sweep_csv(report, out);
    };
    if (out_path.empty()) {
      emit(std::cout);
    } else {
      auto out = open_output(out_path);
      emit(out);
      ordered_json cfg;
      cfg["n"] = n;
      cfg["target"] = target;
      cfg["folds"] = folds;
      cfg["merge_repeats"] = merge_repeats;
      cfg["threads"] = threads;
      cfg["top"] = top;
      cfg["format"] = format;
      write_manifest(out_path, "sweep", cfg, corpus.path, seed, {out_path});
    }
    return kExitOk;
  }
};

struct SynthCmd {
  chordgram::SynthParams params;
  std::string out_path;

  int run() const {
    chordgram::Corpus corpus = chordgram::generate_corpus(params);
    if (params.plant_rate > 0)
      corpus = chordgram::plant_pattern(corpus, chordgram::cadence_pitch_sets(),
                                        params);
    {
      auto out = open_output(out_path);
      chordgram::serialize_corpus(corpus, out, chordgram::CorpusFormat::kJsonl);
    }
    ordered_json cfg;
    cfg["pieces"] = params.pieces;
    cfg["slices"] = params.slices_per_piece;
    cfg["plant_rate"] = params.plant_rate;
    cfg["base_ioi"] = params.base_ioi;
    cfg["jitter"] = params.timing_jitter;
    cfg["pitch_low"] = params.pitch_low;
    cfg["pitch_range"] = params.pitch_range;
    cfg["chord_size"] = params.chord_size;
    cfg["palette_size"] = params.palette_size;
    cfg["target"] = chordgram::kCadenceTargetPattern;
    write_manifest(out_path, "synth", cfg, std::nullopt, params.seed,
                   {out_path});
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// Config files: flat key=value lines mirroring the long flag names of the
// subcommand; values from the command line win. Implemented by injecting
// "--key=value" tokens right after the subcommand token, with a take-last
// policy on every option.
// ---------------------------------------------------------------------------

std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config file " + path + " line " + std::to_string(lineno) +
                  ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error("config file " + path + " line " + std::to_string(lineno) +
                  ": empty key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::size_t subcommand_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      subcommand_pos = i;
      break;
    }
  }
  std::string config_path;
  for (std::size_t i = subcommand_pos; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
    if (!config_path.empty()) break;
  }
  if (config_path.empty() || subcommand_pos == args.size()) return args;

  const std::vector<std::string> tokens = config_file_tokens(config_path);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(subcommand_pos) + 1,
              tokens.begin(), tokens.end());
  return args;
}

const char* const kGrammarHelp = R"HELP(Pattern grammar:
  pattern  := element (";" element)*
  element  := set | "(" MOTION ")" set   (motion required after the first element)
  set      := "{" "}" | "{" IVL ("," IVL)* "}"
  MOTION   := integer 0..11    IVL := integer 1..11
Example: {4,9};(2){5,9};(0){4,7,10};(5){4,7}
Built-in target name: cadence:ii6-I64-V7-I)HELP";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      std::string("chordgram ") + chordgram::kVersion +
      " - recurrent chord-progression discovery in symbolic corpora\n" +
      kGrammarHelp};
  app.require_subcommand(1);
  std::string config_path_sink;  // file contents are applied pre-parse

  ValidateCmd validate_cmd;
  auto* validate = app.add_subcommand(
      "validate", "Check corpus invariants and print a report");
  validate->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  validate_cmd.corpus.attach(validate);
  validate->add_option("--format", validate_cmd.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  ExpandCmd expand_cmd;
  auto* expand = app.add_subcommand(
      "expand", "Full expansion: one slice per unique onset, as JSONL");
  expand->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  expand_cmd.corpus.attach(expand);
  expand->add_option("--out", expand_cmd.out_path, "Output JSONL path")
      ->required();
  expand->add_flag("--merge-repeats", expand_cmd.merge,
                   "Merge consecutive slices with equal pitch-class content");

  MineCmd mine_cmd;
  auto* mine = app.add_subcommand(
      "mine", "Enumerate weighted skip-grams into a distribution file");
  mine->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  mine_cmd.corpus.attach(mine);
  mine_cmd.mining.attach(mine);
  mine->add_option("--out", mine_cmd.out_path, "Distribution JSON path")
      ->required();
  mine->add_option("--dump-instances", mine_cmd.dump_instances,
                   "Also dump every instance as JSONL (debugging)");

  RankCmd rank_cmd;
  auto* rank = app.add_subcommand(
      "rank", "Rank a mined distribution with one measure");
  rank->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  rank->add_option("--dist", rank_cmd.dist_path, "Distribution JSON path")
      ->required();
  rank->add_option("--measure", rank_cmd.measure,
                   "count|pmi|dpmi|lpmi|pwpmi");
  rank->add_option("--top", rank_cmd.top, "Keep only the top N rows");
  rank->add_option("--out", rank_cmd.out_path,
                   "Output path (stdout when omitted)");
  rank->add_option("--format", rank_cmd.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  EvalCmd eval_cmd;
  auto* eval = app.add_subcommand(
      "eval", "Reciprocal rank / MRR of a target pattern under one config");
  eval->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  eval_cmd.corpus.attach(eval);
  eval_cmd.mining.attach(eval);
  eval->add_option("--measure", eval_cmd.measure, "count|pmi|dpmi|lpmi|pwpmi");
  eval->add_option("--target", eval_cmd.target,
                   "Target pattern or built-in name");
  eval->add_option("--folds", eval_cmd.folds, "K-fold piece partition (1 = whole corpus)")
      ->check(CLI::Range(1, 10000));
  eval->add_option("--seed", eval_cmd.seed, "Fold-partition seed");
  eval->add_option("--out", eval_cmd.out_path,
                   "Result JSON path (stdout when omitted)");

  SweepCmd sweep_cmd;
  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate the full selection x weighting x measure grid");
  sweep->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  sweep_cmd.corpus.attach(sweep);
  sweep->add_option("--n", sweep_cmd.n, "Pattern length")
      ->check(CLI::Range(2, chordgram::NGramType::kMaxN));
  sweep->add_option("--target", sweep_cmd.target,
                    "Target pattern or built-in name");
  sweep->add_option("--folds", sweep_cmd.folds, "K-fold piece partition")
      ->check(CLI::Range(1, 10000));
  sweep->add_option("--seed", sweep_cmd.seed, "Fold-partition seed");
  sweep->add_flag("--merge-repeats", sweep_cmd.merge_repeats,
                  "Merge consecutive slices with equal pitch-class content");
  sweep->add_option("--threads", sweep_cmd.threads, "Worker threads")
      ->check(CLI::Range(1, 256));
  sweep->add_option("--top", sweep_cmd.top,
                    "Embed each cell's top-N rows in the JSON report");
  sweep->add_option("--out", sweep_cmd.out_path,
                    "Report path (stdout when omitted)");
  sweep->add_option("--format", sweep_cmd.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  SynthCmd synth_cmd;
  auto* synth = app.add_subcommand(
      "synth", "Generate a seeded synthetic corpus with planted cadences");
  synth->add_option("--config", config_path_sink,
      "Config file with key=value lines mirroring the flag names");
  synth->add_option("--pieces", synth_cmd.params.pieces, "Piece count")
      ->check(CLI::Range(1, 1000000));
  synth->add_option("--slices", synth_cmd.params.slices_per_piece,
                    "Sonorities per piece")
      ->check(CLI::Range(4, 1000000));
  synth->add_option("--plant-rate", synth_cmd.params.plant_rate,
                    "Fraction of pieces ending with the planted cadence")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--base-ioi", synth_cmd.params.base_ioi,
                    "Seconds per beat in performance time");
  synth->add_option("--jitter", synth_cmd.params.timing_jitter,
                    "Std dev of performance-onset jitter (seconds)");
  synth->add_option("--pitch-low", synth_cmd.params.pitch_low,
                    "Lowest noise pitch");
  synth->add_option("--pitch-range", synth_cmd.params.pitch_range,
                    "Noise pitch window size (semitones)");
  synth->add_option("--chord-size", synth_cmd.params.chord_size,
                    "Pitches per noise sonority");
  synth->add_option("--palette-size", synth_cmd.params.palette_size,
                    "Chords per piece palette (0 = fresh chord per slice)");
  synth->add_option("--seed", synth_cmd.params.seed, "Generator seed");
  synth->add_option("--out", synth_cmd.out_path, "Corpus JSONL path")
      ->required();

  // Later occurrences win, so command-line values override config-file
  // injections.
  for (CLI::App* sub : app.get_subcommands(std::function<bool(CLI::App*)>{}))
    for (CLI::Option* opt : sub->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  try {
    if (*validate) return validate_cmd.run();
    if (*expand) return expand_cmd.run();
    if (*mine) return mine_cmd.run();
    if (*rank) return rank_cmd.run();
    if (*eval) return eval_cmd.run();
    if (*sweep) return sweep_cmd.run();
    if (*synth) return synth_cmd.run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
