// Copyright 2026 The Overlap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "overlap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "overlap/analysis.hpp"
#include "overlap/errors.hpp"
#include "overlap/index.hpp"
#include "overlap/ingest.hpp"
#include "overlap/io.hpp"
#include "overlap/kernels.hpp"
#include "overlap/pipeline.hpp"
#include "overlap/report.hpp"
#include "overlap/retrieval.hpp"
#include "overlap/schema.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace overlap::cli {

namespace {

struct LexiconOptions {
  std::string connectives;
  std::string abbreviations;
  std::string male;
  std::string female;

  Lexicon build() const {
    Lexicon lex = Lexicon::defaults();
    if (!connectives.empty()) lex.connectives = WordList::load(connectives);
    if (!abbreviations.empty()) lex.abbreviations = WordList::load(abbreviations);
    if (!male.empty()) lex.male_names = WordList::load(male);
    if (!female.empty()) lex.female_names = WordList::load(female);
    return lex;
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto* p : {&connectives, &abbreviations, &male, &female}) {
      if (!p->empty()) out.push_back(*p);
    }
    return out;
  }
};

void add_tagger_lexicon(CLI::App* sub, LexiconOptions& lex) {
  sub->add_option("--connectives", lex.connectives, "Connective lexicon, one word per line");
}

void add_name_lexicon(CLI::App* sub, LexiconOptions& lex) {
  sub->add_option("--male", lex.male, "Male given names, one per line");
  sub->add_option("--female", lex.female, "Female given names, one per line");
}

void require_input(const std::string& path) {
  if (path.empty()) return;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw DataError("input not found: " + path);
}

ojson option_values(const CLI::App* app) {
  ojson cfg = ojson::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->results();
    } else {
      std::string d = opt->get_default_str();
      if (d.empty()) continue;
      values = {d};
    }
    if (values.size() == 1 && opt->get_expected_max() <= 1) {
      cfg[name] = values.front();
    } else {
      cfg[name] = values;
    }
  }
  return cfg;
}

struct Context {
  const CLI::App* app = nullptr;
  const CLI::App* sub = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

// The manifest records everything needed to re-run the command: the effective
// options (flags and config file), the input digests and the tool version.
void write_manifest(const Context& ctx, const fs::path& where, const std::vector<std::string>& inputs) {
  ojson m;
  m["tool"] = "overlap";
  m["version"] = std::string(kToolVersion);
  m["command"] = ctx.sub->get_name();
  m["global_options"] = option_values(ctx.app);
  m["options"] = option_values(ctx.sub);
  ojson in = ojson::array();
  for (const auto& path : inputs) {
    in.push_back(ojson{{"path", path}, {"sha256", io::sha256_path(path)}});
  }
  m["inputs"] = std::move(in);
  io::write_file_atomic(where, m.dump(2) + "\n");
}

fs::path manifest_beside(const std::string& file) { return fs::path(file + ".manifest.json"); }

std::pair<std::string, std::string> split_named(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) return {fs::path(spec).stem().string(), spec};
  if (eq == 0 || eq + 1 == spec.size()) throw DataError("expected NAME=FILE, got '" + spec + "'");
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw DataError("bad number '" + s + "' in grid '" + spec + "'");
    }
  };
  if (std::count(spec.begin(), spec.end(), ':') == 2) {
    auto a = spec.find(':');
    auto b = spec.find(':', a + 1);
    const double start = number(spec.substr(0, a));
    const double stop = number(spec.substr(a + 1, b - a - 1));
    const double step = number(spec.substr(b + 1));
    if (step <= 0 || stop < start) throw DataError("grid '" + spec + "' needs step > 0 and stop >= start");
    const auto n = static_cast<size_t>(std::floor((stop - start) / step + 1e-9));
    if (n > 1000000) throw DataError("grid '" + spec + "' is too fine");
    for (size_t i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) grid.push_back(number(item));
  }
  if (grid.empty()) throw DataError("empty grid");
  return grid;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- index

struct IndexOptions {
  std::string corpus;
  std::string format = "text";
  std::string name;
  std::string out;
  std::string abbreviations;
  bool serial = false;
};

void run_index(const Context& ctx, const IndexOptions& o, int threads) {
  require_input(o.corpus);
  require_input(o.abbreviations);
  const InputFormat format = parse_input_format(o.format);
  const WordList abbreviations =
      o.abbreviations.empty() ? default_abbreviations() : WordList::load(o.abbreviations);
  const std::string name = o.name.empty() ? fs::path(o.corpus).stem().string() : o.name;
  IndexBuildStats stats;
  PositionalIndex index = index_corpus(o.corpus, format, name, abbreviations,
                                       o.serial ? KernelMode::kSerial : KernelMode::kParallel, threads,
                                       stats);
  index.persist(o.out);
  std::vector<std::string> inputs{o.corpus};
  if (!o.abbreviations.empty()) inputs.push_back(o.abbreviations);
  write_manifest(ctx, fs::path(o.out) / "run_manifest.json", inputs);
  *ctx.err << fmt::format("indexed {} documents from {} records ({} skipped, {} undecodable); {} terms\n",
                          index.stats().num_docs, stats.ingest.documents, stats.ingest.skipped_records,
                          stats.ingest.undecodable, index.term_count());
}

// ---------------------------------------------------------------- parse

struct ParseOptions {
  std::string instances;
  std::string out;
  size_t window = kDefaultWindow;
  LexiconOptions lex;
};

struct ParsedInstance {
  RawInstance raw;
  std::optional<SkeletalInstance> skeleton;
  std::string error;
};

std::vector<ParsedInstance> parse_all(const std::vector<RawInstance>& raws, const Tagger& tagger) {
  std::vector<ParsedInstance> out;
  out.reserve(raws.size());
  for (const RawInstance& raw : raws) {
    ParsedInstance p{raw, std::nullopt, {}};
    try {
      p.skeleton = parse_instance(raw, tagger);
    } catch (const ParseError& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

void run_parse(const Context& ctx, const ParseOptions& o) {
  require_input(o.instances);
  for (const auto& p : o.lex.paths()) require_input(p);
  const Lexicon lex = o.lex.build();
  HeuristicTagger tagger(lex);
  const auto parsed = parse_all(read_instances(o.instances), tagger);
  std::vector<std::string> lines;
  size_t failed = 0;
  for (const auto& p : parsed) {
    if (p.skeleton) {
      auto j = nlohmann::json::parse(skeleton_to_json(*p.skeleton));
      j["query"] = build_query(*p.skeleton, o.window).to_string();
      lines.push_back(j.dump());
    } else {
      ++failed;
      lines.push_back(ojson{{"id", p.raw.id}, {"error", p.error}}.dump());
    }
  }
  io::write_file_atomic(o.out, join_lines(lines));
  std::vector<std::string> inputs{o.instances};
  for (const auto& p : o.lex.paths()) inputs.push_back(p);
  write_manifest(ctx, manifest_beside(o.out), inputs);
  *ctx.err << fmt::format("parsed {} instances ({} failed)\n", parsed.size(), failed);
}

// ---------------------------------------------------------------- score

struct ScoreOptions {
  std::string instances;
  std::vector<std::string> indexes;
  std::string out;
  ScoringParams params;
  size_t window = kDefaultWindow;
  size_t top_k = 0;
  bool serial = false;
  LexiconOptions lex;
};

void run_score(const Context& ctx, const ScoreOptions& o, int threads) {
  require_input(o.instances);
  for (const auto& p : o.indexes) require_input(p);
  for (const auto& p : o.lex.paths()) require_input(p);
  o.params.validate();
  const Lexicon lex = o.lex.build();
  HeuristicTagger tagger(lex);

  std::vector<PositionalIndex> loaded;
  loaded.reserve(o.indexes.size());
  for (const auto& p : o.indexes) loaded.push_back(PositionalIndex::load(p));
  std::vector<const PositionalIndex*> indexes;
  for (const auto& idx : loaded) indexes.push_back(&idx);

  const auto parsed = parse_all(read_instances(o.instances), tagger);
  std::vector<OverlapQuery> queries;
  for (const auto& p : parsed) {
    if (p.skeleton) queries.push_back(build_query(*p.skeleton, o.window));
  }
  const auto scored = score_batch_top_k(queries, indexes, o.params, o.top_k,
                                        o.serial ? KernelMode::kSerial : KernelMode::kParallel, threads);
  std::vector<std::string> lines;
  size_t q = 0, failed = 0;
  for (const auto& p : parsed) {
    if (p.skeleton) {
      const ScoredQuery& s = scored[q++];
      lines.push_back(overlap_to_json(s.overlap, s.top));
    } else {
      ++failed;
      InstanceOverlap empty;
      empty.instance_id = p.raw.id;
      auto j = nlohmann::json::parse(overlap_to_json(empty));
      j["parse_error"] = p.error;
      lines.push_back(j.dump());
    }
  }
  io::write_file_atomic(o.out, join_lines(lines));
  std::vector<std::string> inputs{o.instances};
  for (const auto& p : o.indexes) inputs.push_back(p);
  for (const auto& p : o.lex.paths()) inputs.push_back(p);
  write_manifest(ctx, manifest_beside(o.out), inputs);
  *ctx.err << fmt::format("scored {} instances against {} index(es) ({} unparsed)\n", parsed.size(),
                          indexes.size(), failed);
}

// ---------------------------------------------------------------- partition

struct PartitionOptions {
  std::string scores;
  double cutoff = 0.0;
  std::string out;
};

void run_partition(const Context& ctx, const PartitionOptions& o) {
  require_input(o.scores);
  const ScoreMap scores = read_scores(o.scores);
  const Partition part = partition(scores, o.cutoff);
  const std::set<std::string> overlapping(part.overlap.begin(), part.overlap.end());
  std::string text = "instance_id\tmax_score\tsubset\n";
  for (const auto& [id, score] : scores) {
    text += fmt::format("{}\t{}\t{}\n", id, io::format_double(score),
                        overlapping.contains(id) ? "overlap" : "nonoverlap");
  }
  io::write_file_atomic(o.out, text);
  write_manifest(ctx, manifest_beside(o.out), {o.scores});
  *ctx.err << fmt::format("cutoff {}: {} overlapping, {} non-overlapping\n", io::format_double(o.cutoff),
                          part.overlap.size(), part.nonoverlap.size());
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string instances;
  std::string scores;
  std::vector<std::string> predictions;
  std::vector<double> cutoffs = kDefaultCutoffs;
  std::string grid;
  bool yates = false;
  std::string out;
};

void run_analyze(const Context& ctx, const AnalyzeOptions& o) {
  require_input(o.instances);
  require_input(o.scores);
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& spec : o.predictions) {
    named.push_back(split_named(spec));
    require_input(named.back().second);
  }
  GoldMap gold;
  for (const RawInstance& r : read_instances(o.instances)) gold.emplace(r.id, r.answer);
  const ScoreMap scores = read_scores(o.scores);
  std::vector<PredictionFile> predictions;
  for (const auto& [model, path] : named) predictions.push_back(PredictionFile::load(path, model));
  const auto reports = analyze(gold, scores, predictions, o.cutoffs, o.yates);
  std::vector<OverlapCurve> curves;
  if (!o.grid.empty()) {
    curves.push_back(overlap_curve(scores, parse_grid(o.grid), fs::path(o.scores).stem().string()));
  }
  emit_report(reports, curves, o.out);
  std::vector<std::string> inputs{o.instances, o.scores};
  for (const auto& [model, path] : named) inputs.push_back(path);
  write_manifest(ctx, fs::path(o.out) / "run_manifest.json", inputs);
  *ctx.out << tables_txt(reports);
}

// ---------------------------------------------------------------- curve

struct CurveOptions {
  std::vector<std::string> scores;
  std::string grid = "0:50:1";
  std::string out;
};

void run_curve(const Context& ctx, const CurveOptions& o) {
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& spec : o.scores) {
    named.push_back(split_named(spec));
    require_input(named.back().second);
  }
  const std::vector<double> grid = parse_grid(o.grid);
  std::vector<OverlapCurve> curves;
  for (const auto& [name, path] : named) curves.push_back(overlap_curve(read_scores(path), grid, name));
  emit_report({}, curves, o.out);
  std::vector<std::string> inputs;
  for (const auto& [name, path] : named) inputs.push_back(path);
  write_manifest(ctx, fs::path(o.out) / "run_manifest.json", inputs);
}

// ---------------------------------------------------------------- pipeline

struct PipelineCliOptions {
  std::string input;
  std::string format = "jsonl";
  std::string out;
  std::string labels;
  uint64_t seed = 0;
  size_t min_tokens = 6;
  size_t max_tokens = 60;
  LexiconOptions lex;
};

void run_pipeline_command(const Context& ctx, const PipelineCliOptions& o, int threads) {
  require_input(o.input);
  require_input(o.labels);
  for (const auto& p : o.lex.paths()) require_input(p);
  if (o.min_tokens > o.max_tokens) throw DataError("--min-tokens exceeds --max-tokens");
  const Lexicon lex = o.lex.build();
  HeuristicTagger tagger(lex);
  PipelineOptions options;
  options.min_tokens = o.min_tokens;
  options.max_tokens = o.max_tokens;
  options.seed = o.seed;
  options.threads = threads;

  IngestStats ingest;
  const std::vector<RawDocument> docs = read_all_documents(o.input, parse_input_format(o.format), ingest);
  PipelineRun run = run_pipeline(docs, lex, tagger, options);
  run.ingest = ingest;

  // Labels are validated before anything is written.
  std::optional<std::vector<MergeOutcome>> merged;
  std::vector<AnnotationRecord> records;
  if (!o.labels.empty()) {
    records = read_labels(o.labels);
    std::set<std::string> known;
    for (const auto& p : run.perturbed) known.insert(p.instance_id);
    std::vector<std::string> unknown;
    for (const auto& r : records) {
      if (!known.contains(r.instance_id)) unknown.push_back(r.instance_id);
    }
    if (!unknown.empty()) {
      std::string list;
      for (size_t i = 0; i < unknown.size() && i < 10; ++i) list += (i ? ", " : "") + unknown[i];
      throw DataError(fmt::format("labels reference {} unknown instance(s): {}", unknown.size(), list));
    }
    merged = merge_annotations(records);
  }

  const fs::path out(o.out);
  std::vector<std::string> lines;
  for (const auto& s : run.sentences) lines.push_back(sentence_to_json(s));
  io::write_file_atomic(out / "sentences.jsonl", join_lines(lines));
  lines.clear();
  for (size_t i : run.connective_pass) lines.push_back(sentence_to_json(run.sentences[i]));
  io::write_file_atomic(out / "connective.jsonl", join_lines(lines));
  lines.clear();
  for (const auto& c : run.candidates) lines.push_back(candidate_to_json(c));
  io::write_file_atomic(out / "candidates.jsonl", join_lines(lines));
  lines.clear();
  for (const auto& p : run.perturbed) lines.push_back(perturbed_to_json(p));
  io::write_file_atomic(out / "perturbed.jsonl", join_lines(lines));

  std::string tasks = "instance_id\ttask\n";
  for (const auto& p : run.perturbed) tasks += p.instance_id + "\t" + bracketed(p) + "\n";
  io::write_file_atomic(out / "annotation_tasks.tsv", tasks);

  // Every sentence that left the pipeline, grouped by the stage that dropped it.
  std::string dropped = "source_ref\treason\n";
  for (const auto& s : run.length_dropped) dropped += s.source_ref + "\t" + s.reason + "\n";
  {
    std::set<size_t> passed(run.connective_pass.begin(), run.connective_pass.end());
    for (size_t i = 0; i < run.sentences.size(); ++i) {
      if (!passed.contains(i)) dropped += run.sentences[i].id + "\tconnective\n";
    }
    std::set<std::string> candidates;
    for (const auto& c : run.candidates) candidates.insert(c.source_ref);
    for (size_t i : run.connective_pass) {
      if (!candidates.contains(run.sentences[i].id)) dropped += run.sentences[i].id + "\tantecedent\n";
    }
  }
  for (const auto& s : run.skipped) dropped += s.source_ref + "\t" + s.reason + "\n";
  io::write_file_atomic(out / "dropped.tsv", dropped);

  FunnelCounts funnel = run.funnel();
  if (merged) {
    std::map<std::string, const MergeOutcome*> by_id;
    for (const auto& m : *merged) by_id.emplace(m.instance_id, &m);
    std::string merge_tsv = "instance_id\tvotes_1\tvotes_2\toutcome\tgold\n";
    for (size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      const size_t ones = static_cast<size_t>(std::count(r.labels.begin(), r.labels.end(), 1));
      const auto& m = (*merged)[i];
      merge_tsv += fmt::format("{}\t{}\t{}\t{}\t{}\n", r.instance_id, ones, r.labels.size() - ones, m.reason,
                               m.gold ? std::to_string(*m.gold) : "");
    }
    io::write_file_atomic(out / "merge.tsv", merge_tsv);

    std::vector<std::string> dataset;
    std::string readable;
    size_t kept = 0;
    for (const auto& p : run.perturbed) {
      auto it = by_id.find(p.instance_id);
      if (it == by_id.end() || !it->second->gold) continue;
      ++kept;
      const int gold = *it->second->gold;
      dataset.push_back(instance_to_json(to_raw_instance(p, gold)));
      readable += fmt::format("{}\t{}\tanswer: {}\n", p.instance_id, bracketed(p), gold == 1 ? p.name1 : p.name2);
    }
    io::write_file_atomic(out / "dataset.jsonl", join_lines(dataset));
    io::write_file_atomic(out / "dataset_readable.txt", readable);
    funnel.annotated = records.size();
    funnel.kept = kept;
  }
  io::write_file_atomic(out / "funnel.csv", funnel.to_csv());

  ojson stats;
  stats["documents"] = run.ingest.documents;
  stats["skipped_records"] = run.ingest.skipped_records;
  stats["undecodable"] = run.ingest.undecodable;
  stats["empty_documents"] = run.clean.empty_documents;
  stats["too_short"] = run.clean.too_short;
  stats["too_long"] = run.clean.too_long;
  stats["skipped_candidates"] = run.skipped.size();
  io::write_file_atomic(out / "stats.json", stats.dump(2) + "\n");

  std::vector<std::string> inputs{o.input};
  if (!o.labels.empty()) inputs.push_back(o.labels);
  for (const auto& p : o.lex.paths()) inputs.push_back(p);
  write_manifest(ctx, out / "run_manifest.json", inputs);
  if (run.ingest.skipped_records + run.ingest.undecodable > 0) {
    *ctx.err << fmt::format("warning: skipped {} malformed and {} undecodable records\n",
                            run.ingest.skipped_records, run.ingest.undecodable);
  }
  *ctx.err << funnel.to_csv();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Test-set overlap toolkit: index corpora, score instances, analyze subsets, build datasets"};
  app.name("overlap");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: all available)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  IndexOptions index_opts;
  auto* index_cmd = app.add_subcommand("index", "Build a positional index over a corpus");
  index_cmd->add_option("--corpus", index_opts.corpus, "Corpus file")->required();
  index_cmd->add_option("--format", index_opts.format, "text, lines or jsonl")->capture_default_str();
  index_cmd->add_option("--name", index_opts.name, "Corpus name (default: file stem)");
  index_cmd->add_option("--out", index_opts.out, "Index directory")->required();
  index_cmd->add_option("--abbreviations", index_opts.abbreviations, "Abbreviation list for the splitter");
  index_cmd->add_flag("--serial", index_opts.serial, "Use the single-threaded reference kernels");

  ParseOptions parse_opts;
  auto* parse_cmd = app.add_subcommand("parse", "Parse instances into skeletal form and queries");
  parse_cmd->add_option("--instances", parse_opts.instances, "Instances (JSON lines)")->required();
  parse_cmd->add_option("--out", parse_opts.out, "Output JSON lines")->required();
  parse_cmd->add_option("--window", parse_opts.window, "Proximity window in tokens")->capture_default_str();
  add_tagger_lexicon(parse_cmd, parse_opts.lex);

  ScoreOptions score_opts;
  auto* score_cmd = app.add_subcommand("score", "Score instances against one or more indexes");
  score_cmd->add_option("--instances", score_opts.instances, "Instances (JSON lines)")->required();
  score_cmd->add_option("--index", score_opts.indexes, "Index directory (repeatable)")->required();
  score_cmd->add_option("--out", score_opts.out, "Output JSON lines")->required();
  score_cmd->add_option("--k1", score_opts.params.k1, "BM25 k1")->capture_default_str();
  score_cmd->add_option("--b", score_opts.params.b, "BM25 b")->capture_default_str();
  score_cmd->add_option("--idf-floor", score_opts.params.idf_floor, "Lower bound on IDF")->capture_default_str();
  score_cmd->add_flag("--allow-any-k1", score_opts.params.allow_any_k1, "Accept k1 outside [1.2, 2.0]");
  score_cmd->add_option("--window", score_opts.window, "Proximity window in tokens")->capture_default_str();
  score_cmd->add_option("--top-k", score_opts.top_k, "Also list the top k matches per instance")
      ->capture_default_str();
  score_cmd->add_flag("--serial", score_opts.serial, "Use the single-threaded reference kernels");
  add_tagger_lexicon(score_cmd, score_opts.lex);

  PartitionOptions partition_opts;
  auto* partition_cmd = app.add_subcommand("partition", "Split scored instances at a cutoff");
  partition_cmd->add_option("--scores", partition_opts.scores, "Scores (JSON lines)")->required();
  partition_cmd->add_option("--cutoff", partition_opts.cutoff, "Overlap iff score > cutoff")
      ->capture_default_str();
  partition_cmd->add_option("--out", partition_opts.out, "Output TSV")->required();

  AnalyzeOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Subset accuracies and chi-squared tests per cutoff");
  analyze_cmd->add_option("--instances", analyze_opts.instances, "Gold instances (JSON lines)")->required();
  analyze_cmd->add_option("--scores", analyze_opts.scores, "Scores (JSON lines)")->required();
  analyze_cmd->add_option("--predictions", analyze_opts.predictions, "MODEL=FILE predictions (repeatable)")
      ->required();
  analyze_cmd->add_option("--cutoffs", analyze_opts.cutoffs, "Cutoffs")
      ->delimiter(',')
      ->capture_default_str();
  analyze_cmd->add_option("--grid", analyze_opts.grid, "Also emit an overlap curve over START:STOP:STEP");
  analyze_cmd->add_flag("--yates", analyze_opts.yates, "Apply Yates' continuity correction");
  analyze_cmd->add_option("--out", analyze_opts.out, "Report directory")->required();

  CurveOptions curve_opts;
  auto* curve_cmd = app.add_subcommand("curve", "Proportion of overlapping instances per cutoff");
  curve_cmd->add_option("--scores", curve_opts.scores, "NAME=FILE scores (repeatable)")->required();
  curve_cmd->add_option("--grid", curve_opts.grid, "START:STOP:STEP or a comma list")->capture_default_str();
  curve_cmd->add_option("--out", curve_opts.out, "Report directory")->required();

  PipelineCliOptions pipeline_opts;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Build a low-overlap pronoun dataset from raw text");
  pipeline_cmd->add_option("--input", pipeline_opts.input, "Comment dump or text file")->required();
  pipeline_cmd->add_option("--format", pipeline_opts.format, "jsonl, text or lines")->capture_default_str();
  pipeline_cmd->add_option("--out", pipeline_opts.out, "Output directory")->required();
  pipeline_cmd->add_option("--labels", pipeline_opts.labels, "Completed annotations (TSV)");
  pipeline_cmd->add_option("--seed", pipeline_opts.seed, "Name-substitution seed")->capture_default_str();
  pipeline_cmd->add_option("--min-tokens", pipeline_opts.min_tokens, "Shortest sentence kept")
      ->capture_default_str();
  pipeline_cmd->add_option("--max-tokens", pipeline_opts.max_tokens, "Longest sentence kept")
      ->capture_default_str();
  add_tagger_lexicon(pipeline_cmd, pipeline_opts.lex);
  pipeline_cmd->add_option("--abbreviations", pipeline_opts.lex.abbreviations, "Abbreviation list");
  add_name_lexicon(pipeline_cmd, pipeline_opts.lex);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx{&app, nullptr, &out, &err};
  try {
    if (*index_cmd) {
      ctx.sub = index_cmd;
      run_index(ctx, index_opts, threads);
    } else if (*parse_cmd) {
      ctx.sub = parse_cmd;
      run_parse(ctx, parse_opts);
    } else if (*score_cmd) {
      ctx.sub = score_cmd;
      run_score(ctx, score_opts, threads);
    } else if (*partition_cmd) {
      ctx.sub = partition_cmd;
      run_partition(ctx, partition_opts);
    } else if (*analyze_cmd) {
      ctx.sub = analyze_cmd;
      run_analyze(ctx, analyze_opts);
    } else if (*curve_cmd) {
      ctx.sub = curve_cmd;
      run_curve(ctx, curve_opts);
    } else if (*pipeline_cmd) {
      ctx.sub = pipeline_cmd;
      run_pipeline_command(ctx, pipeline_opts, threads);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace overlap::cli
