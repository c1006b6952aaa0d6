// Command-line front end: generate / coverage / mix / align-train /
// index-build / dedup. Every subcommand reads an optional key=value --config
// file; command-line flags override file values. Exit codes: 0 success,
// 1 hard error, 2 configuration or usage error.

#include <algorithm>
#include <iostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dictaug/align.hpp"
#include "dictaug/annindex.hpp"
#include "dictaug/corpusio.hpp"
#include "dictaug/coverage.hpp"
#include "dictaug/embedding.hpp"
#include "dictaug/error.hpp"
#include "dictaug/pipeline.hpp"
#include "dictaug/util.hpp"

namespace {

using namespace dictaug;

void write_extra_manifest(const RunManifest& manifest, const std::string& path) {
  if (!path.empty()) manifest.save(path);
}

std::string trim_ws(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

// key=value config lines; '#'/';' comments, blank lines and cosmetic
// [section] headers allowed. Repeated keys are kept in order (scalar options
// reject duplicates downstream; list options accumulate).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::vector<std::string> lines;
  try {
    lines = read_lines(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string line = trim_ws(lines[ln]);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(ln + 1) + ": expected key=value");
    }
    const std::string key = trim_ws(line.substr(0, eq));
    std::string value = trim_ws(line.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\''))) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(ln + 1) + ": empty key");
    items.emplace_back(key, value);
  }
  return items;
}

// Pulls --config out of the raw arguments and splices the file's keys in as
// ordinary --key value flags, skipping keys the user already passed so that
// command-line flags override the file.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
  std::string config_path;
  std::vector<std::string> kept;
  kept.reserve(args.size());
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      config_path = args[++i];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = arg.substr(9);
    } else {
      kept.push_back(arg);
    }
  }
  if (config_path.empty()) return kept;

  std::unordered_set<std::string> given;
  for (const std::string& arg : kept) {
    if (arg.size() > 2 && arg[0] == '-' && arg[1] == '-') {
      const size_t eq = arg.find('=');
      given.insert(arg.substr(2, eq == std::string::npos ? std::string::npos : eq - 2));
    }
  }
  for (auto& [key, value] : read_config_file(config_path)) {
    if (key == "config" || given.count(key)) continue;
    kept.push_back("--" + key);
    kept.push_back(std::move(value));
  }
  return kept;
}

bool numeric_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void add_generate_options(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--bitext_source", cfg.bitext_source, "Out-of-domain source-side text file");
  cmd->add_option("--bitext_target", cfg.bitext_target, "Out-of-domain target-side text file");
  cmd->add_option("--dictionary", cfg.dictionary, "Domain dictionary TSV (source<TAB>target)");
  cmd->add_option("--embeddings", cfg.embeddings,
                  "Precomputed embeddings (TSV or binary); empty uses the built-in fallback");
  cmd->add_option("--lexicon", cfg.lexicon, "Tag lexicon TSV for the source language");
  cmd->add_option("--output_dir", cfg.output_dir, "Output directory");
  cmd->add_option("--cache_dir", cfg.cache_dir, "Index/model cache directory");
  cmd->add_option("--source_lang", cfg.source_lang, "Source language tag");
  cmd->add_option("--target_lang", cfg.target_lang, "Target language tag");
  cmd->add_option("--top_n", cfg.top_n, "Template sentences per dictionary entry");
  cmd->add_option("--max_pairs", cfg.max_pairs, "Stop after this many pairs (0 = unbounded)");
  cmd->add_option("--sim_floor", cfg.sim_floor, "Skip candidates below this similarity (<=0 off)");
  cmd->add_option("--phrase_max_len", cfg.phrase_max_len, "Longest candidate phrase (tokens)");
  cmd->add_option("--keep_identity", cfg.keep_identity, "Keep identity substitutions");
  cmd->add_option("--dedup_input", cfg.dedup_input, "Deduplicate the bitext before use");
  cmd->add_option("--dedup_output", cfg.dedup_output, "Drop exact duplicate generated pairs");
  cmd->add_option("--mix_with_ood", cfg.mix_with_ood, "Also write the mixed training corpus");
  cmd->add_option("--embedding_dim", cfg.embedding_dim, "Fallback embedder dimension");
  cmd->add_option("--embedding_seed", cfg.embedding_seed, "Fallback embedder seed");
  cmd->add_option("--ann_clusters", cfg.ann_clusters, "Index clusters (0 = sqrt of corpus size)");
  cmd->add_option("--ann_nprobe", cfg.ann_nprobe, "Clusters probed per query");
  cmd->add_option("--ann_seed", cfg.ann_seed, "Index k-means seed");
  cmd->add_option("--ann_max_iters", cfg.ann_max_iters, "Index k-means iteration cap");
  cmd->add_option("--align_iterations", cfg.align_iterations, "Alignment EM iterations");
  cmd->add_option("--align_lambda", cfg.align_lambda, "Diagonal tension");
  cmd->add_option("--align_p_null", cfg.align_p_null, "Null-alignment probability");
  cmd->add_option("--align_optimize_lambda", cfg.align_optimize_lambda,
                  "Update lambda by gradient each iteration");
  cmd->add_option("--mix_seed", cfg.mix_seed, "Shuffle seed for the mixed corpus");
  cmd->add_option("--mix_shuffle", cfg.mix_shuffle, "Shuffle the mixed corpus");
  cmd->add_option("--workers", cfg.workers, "Worker threads (0 = hardware)");
}

int cmd_generate(PipelineConfig cfg, const std::string& manifest_path) {
  cfg.retain_pairs = false;
  const GenerateResult result = run_generate(cfg);
  const auto& counts = result.manifest.doc["counts"];
  std::cout << "generated " << counts["generated"] << " pairs from "
            << counts["dictionary_entries"] << " dictionary entries (attempted "
            << counts["attempted"] << ", deduped " << counts["deduped"] << ")\n";
  std::cout << "corpus: " << result.source_path.string() << " / " << result.target_path.string()
            << "\nprovenance: " << result.provenance_path.string()
            << "\nmanifest: " << result.manifest_path.string() << "\n";
  write_extra_manifest(result.manifest, manifest_path);
  return 0;
}

int cmd_coverage(const CoverageJob& job, const std::string& manifest_path) {
  const CoverageRunResult result = run_coverage(job);
  std::cout << "ED(" << result.primary.corpus << ") = " << result.primary.ed_value << "\n";
  for (size_t i = 0; i < result.comparisons.size(); ++i) {
    std::cout << "ED(" << result.comparisons[i].corpus << ") = " << result.comparisons[i].ed_value
              << "  gain(" << result.primary.corpus << " over " << result.comparisons[i].corpus
              << ") = " << result.gains[i].gain << "\n";
  }
  write_extra_manifest(result.manifest, manifest_path);
  return 0;
}

struct MixArgs {
  std::string ood_source, ood_target;
  std::string pseudo_source, pseudo_target;
  std::string source_lang = "en", target_lang = "fr";
  std::string pseudo_source_lang, pseudo_target_lang; // default: same as ood
  std::string output_source, output_target;
  uint64_t seed = 42;
  bool shuffle = true;
  uint64_t workers = 0;
};

int cmd_mix(const MixArgs& args, const std::string& manifest_path) {
  const auto require = [](const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key: ") + key);
  };
  require(args.ood_source, "ood_source");
  require(args.ood_target, "ood_target");
  require(args.pseudo_source, "pseudo_source");
  require(args.pseudo_target, "pseudo_target");
  require(args.output_source, "output_source");
  require(args.output_target, "output_target");

  const Bitext ood = load_bitext(args.ood_source, args.ood_target, args.source_lang,
                                 args.target_lang, args.workers);
  const std::string ps_lang =
      args.pseudo_source_lang.empty() ? args.source_lang : args.pseudo_source_lang;
  const std::string pt_lang =
      args.pseudo_target_lang.empty() ? args.target_lang : args.pseudo_target_lang;
  const Bitext pseudo_bitext =
      load_bitext(args.pseudo_source, args.pseudo_target, ps_lang, pt_lang, args.workers);
  PseudoCorpus pseudo;
  pseudo.source_lang = pseudo_bitext.source_lang;
  pseudo.target_lang = pseudo_bitext.target_lang;
  pseudo.pairs.reserve(pseudo_bitext.pairs.size());
  for (const auto& p : pseudo_bitext.pairs) {
    PseudoPair pp;
    pp.g_source = p.source;
    pp.g_target = p.target;
    pseudo.pairs.push_back(std::move(pp));
  }

  const Bitext mixed = mix_corpora(ood, pseudo, args.seed, args.shuffle);
  write_bitext(mixed, args.output_source, args.output_target, WriteMode::Tokenized);
  std::cout << "mixed " << ood.pairs.size() << " + " << pseudo.pairs.size() << " -> "
            << mixed.pairs.size() << " pairs\n";

  RunManifest manifest;
  manifest.doc = {{"tool", "dictaug"},
                  {"op", "mix"},
                  {"config",
                   {{"ood_source", args.ood_source},
                    {"ood_target", args.ood_target},
                    {"pseudo_source", args.pseudo_source},
                    {"pseudo_target", args.pseudo_target},
                    {"seed", args.seed},
                    {"shuffle", args.shuffle}}},
                  {"counts",
                   {{"ood_pairs", ood.pairs.size()},
                    {"pseudo_pairs", pseudo.pairs.size()},
                    {"mixed_pairs", mixed.pairs.size()}}},
                  {"outputs", {{"source", args.output_source}, {"target", args.output_target}}}};
  write_extra_manifest(manifest, manifest_path);
  return 0;
}

struct AlignTrainArgs {
  std::string bitext_source, bitext_target;
  std::string model_out;
  std::string alignments_out;
  uint64_t iterations = 5;
  double lambda = 4.0;
  double p_null = 0.08;
  bool optimize_lambda = false;
  uint64_t workers = 0;
};

int cmd_align_train(const AlignTrainArgs& args, const std::string& manifest_path) {
  const auto require = [](const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key: ") + key);
  };
  require(args.bitext_source, "bitext_source");
  require(args.bitext_target, "bitext_target");
  require(args.model_out, "model_out");

  const Bitext bitext =
      load_bitext(args.bitext_source, args.bitext_target, "src", "tgt", args.workers);
  TrainOptions opts;
  opts.iterations = static_cast<uint32_t>(args.iterations);
  opts.lambda_init = args.lambda;
  opts.p_null = args.p_null;
  opts.optimize_lambda = args.optimize_lambda;
  opts.workers = args.workers;
  const AlignmentModel model = train_alignment(bitext, opts);
  model.save(args.model_out);

  if (!args.alignments_out.empty()) {
    std::vector<AlignmentLinks> all;
    all.reserve(bitext.pairs.size());
    for (const auto& pair : bitext.pairs) all.push_back(viterbi_align(model, pair));
    write_pharaoh(args.alignments_out, all);
  }

  std::cout << "trained on " << bitext.pairs.size() << " pairs, " << args.iterations
            << " iterations, final log-likelihood " << model.iteration_loglik().back() << "\n";
  std::cout << "model: " << args.model_out << "\n";

  RunManifest manifest;
  manifest.doc = {{"tool", "dictaug"},
                  {"op", "align-train"},
                  {"config",
                   {{"bitext_source", args.bitext_source},
                    {"bitext_target", args.bitext_target},
                    {"iterations", args.iterations},
                    {"lambda", args.lambda},
                    {"p_null", args.p_null},
                    {"optimize_lambda", args.optimize_lambda}}},
                  {"inputs",
                   {{"bitext_source", checksum_file(args.bitext_source)},
                    {"bitext_target", checksum_file(args.bitext_target)}}},
                  {"counts", {{"pairs", bitext.pairs.size()}}},
                  {"model",
                   {{"lambda", model.lambda()},
                    {"p_null", model.p_null()},
                    {"iteration_loglik", model.iteration_loglik()}}},
                  {"outputs", {{"model", args.model_out}, {"alignments", args.alignments_out}}}};
  write_extra_manifest(manifest, manifest_path);
  return 0;
}

struct IndexBuildArgs {
  std::string bitext_source, bitext_target;
  std::string embeddings;
  std::string index_out;
  uint64_t embedding_dim = 64;
  uint64_t embedding_seed = 42;
  uint64_t clusters = 0;
  uint64_t seed = 42;
  uint64_t max_iters = 15;
  uint64_t workers = 0;
};

int cmd_index_build(const IndexBuildArgs& args, const std::string& manifest_path) {
  if (args.index_out.empty()) throw ConfigError("missing required config key: index_out");
  if (args.embeddings.empty() && (args.bitext_source.empty() || args.bitext_target.empty())) {
    throw ConfigError("index-build needs either embeddings or bitext_source + bitext_target");
  }

  EmbeddingStore sentences = [&] {
    if (!args.embeddings.empty()) {
      const EmbeddingStore full = load_embeddings(args.embeddings);
      EmbeddingStore numeric(full.dim());
      for (size_t i = 0; i < full.size(); ++i) {
        if (numeric_key(full.key(i))) {
          const auto row = full.row(i);
          numeric.add(full.key(i), Vec(row.begin(), row.end()));
        }
      }
      if (numeric.size() == 0) {
        throw Error("embeddings file has no sentence-id keys: " + args.embeddings);
      }
      return numeric;
    }
    const Bitext bitext =
        load_bitext(args.bitext_source, args.bitext_target, "src", "tgt", args.workers);
    if (bitext.pairs.empty()) throw Error("bitext is empty: " + args.bitext_source);
    EmbeddingStore built(args.embedding_dim);
    for (const auto& pair : bitext.pairs) {
      built.add(EmbeddingStore::sentence_key(pair.id),
                fallback_embed(join_tokens(pair.source), args.embedding_dim, args.embedding_seed));
    }
    return built;
  }();

  BuildOptions opts;
  opts.clusters = static_cast<uint32_t>(args.clusters);
  opts.seed = args.seed;
  opts.max_iters = static_cast<uint32_t>(args.max_iters);
  opts.workers = args.workers;
  const AnnIndex index = AnnIndex::build(sentences, opts);
  index.save(args.index_out);
  std::cout << "indexed " << index.size() << " vectors (dim " << index.dim() << ") into "
            << index.clusters() << " clusters\n";
  std::cout << "index: " << args.index_out << "\n";

  RunManifest manifest;
  manifest.doc = {{"tool", "dictaug"},
                  {"op", "index-build"},
                  {"config",
                   {{"embeddings", args.embeddings},
                    {"bitext_source", args.bitext_source},
                    {"bitext_target", args.bitext_target},
                    {"embedding_dim", args.embedding_dim},
                    {"embedding_seed", args.embedding_seed},
                    {"clusters", args.clusters},
                    {"seed", args.seed},
                    {"max_iters", args.max_iters}}},
                  {"counts",
                   {{"vectors", index.size()},
                    {"clusters", index.clusters()},
                    {"dim", index.dim()}}},
                  {"outputs", {{"index", args.index_out}}}};
  write_extra_manifest(manifest, manifest_path);
  return 0;
}

struct DedupArgs {
  std::string bitext_source, bitext_target;
  std::string output_source, output_target;
  uint64_t workers = 0;
};

int cmd_dedup(const DedupArgs& args, const std::string& manifest_path) {
  const auto require = [](const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key: ") + key);
  };
  require(args.bitext_source, "bitext_source");
  require(args.bitext_target, "bitext_target");
  require(args.output_source, "output_source");
  require(args.output_target, "output_target");

  const Bitext bitext =
      load_bitext(args.bitext_source, args.bitext_target, "src", "tgt", args.workers);
  uint64_t removed = 0;
  const Bitext deduped = deduplicate(bitext, &removed);
  write_bitext(deduped, args.output_source, args.output_target, WriteMode::Raw);
  std::cout << "kept " << deduped.pairs.size() << " of " << bitext.pairs.size() << " pairs ("
            << removed << " duplicates removed)\n";

  RunManifest manifest;
  manifest.doc = {{"tool", "dictaug"},
                  {"op", "dedup"},
                  {"config",
                   {{"bitext_source", args.bitext_source},
                    {"bitext_target", args.bitext_target}}},
                  {"counts",
                   {{"input_pairs", bitext.pairs.size()},
                    {"output_pairs", deduped.pairs.size()},
                    {"removed", removed}}},
                  {"outputs", {{"source", args.output_source}, {"target", args.output_target}}}};
  write_extra_manifest(manifest, manifest_path);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary-driven corpus augmentation for domain adaptation"};
  app.require_subcommand(1);

  int rc = 0;
  std::string config_path; // consumed by expand_config_args before parsing

  PipelineConfig gen_cfg;
  std::string gen_manifest;
  auto* gen = app.add_subcommand("generate", "Generate a pseudo in-domain parallel corpus");
  gen->add_option("--config", config_path, "Key=value config file (flags override)");
  add_generate_options(gen, gen_cfg);
  gen->add_option("--manifest", gen_manifest, "Also write the run manifest to this path");
  gen->callback([&] { rc = cmd_generate(gen_cfg, gen_manifest); });

  CoverageJob cov_job;
  std::string cov_side = "source";
  std::string cov_manifest;
  auto* cov = app.add_subcommand("coverage", "Enhanced-domain-coverage reports and gains");
  cov->add_option("--config", config_path, "Key=value config file (flags override)");
  cov->add_option("--dictionary", cov_job.dictionary, "Domain dictionary TSV");
  cov->add_option("--testset", cov_job.testset, "In-domain test text file");
  cov->add_option("--corpus", cov_job.corpus, "Primary corpus text file (one side)");
  cov->add_option("--compare", cov_job.compare, "Comparison corpora (repeatable)");
  cov->add_option("--output_dir", cov_job.output_dir, "Report directory");
  cov->add_option("--side", cov_side, "Dictionary side to match: source | target");
  cov->add_option("--fold_case", cov_job.fold_case, "Case-insensitive matching");
  cov->add_option("--format", cov_job.format, "Report format: json | csv | both");
  cov->add_option("--workers", cov_job.workers, "Worker threads (0 = hardware)");
  cov->add_option("--manifest", cov_manifest, "Also write the run manifest to this path");
  cov->callback([&] {
    if (cov_side == "source") {
      cov_job.side = DictionarySide::Source;
    } else if (cov_side == "target") {
      cov_job.side = DictionarySide::Target;
    } else {
      throw ConfigError("side must be source or target (got '" + cov_side + "')");
    }
    rc = cmd_coverage(cov_job, cov_manifest);
  });

  MixArgs mix_args;
  std::string mix_manifest;
  auto* mix = app.add_subcommand("mix", "Concatenate and shuffle OOD + pseudo corpora");
  mix->add_option("--config", config_path, "Key=value config file (flags override)");
  mix->add_option("--ood_source", mix_args.ood_source, "OOD source-side file");
  mix->add_option("--ood_target", mix_args.ood_target, "OOD target-side file");
  mix->add_option("--pseudo_source", mix_args.pseudo_source, "Pseudo source-side file");
  mix->add_option("--pseudo_target", mix_args.pseudo_target, "Pseudo target-side file");
  mix->add_option("--source_lang", mix_args.source_lang, "OOD source language tag");
  mix->add_option("--target_lang", mix_args.target_lang, "OOD target language tag");
  mix->add_option("--pseudo_source_lang", mix_args.pseudo_source_lang,
                  "Pseudo source language tag (defaults to source_lang)");
  mix->add_option("--pseudo_target_lang", mix_args.pseudo_target_lang,
                  "Pseudo target language tag (defaults to target_lang)");
  mix->add_option("--output_source", mix_args.output_source, "Mixed source-side output");
  mix->add_option("--output_target", mix_args.output_target, "Mixed target-side output");
  mix->add_option("--seed", mix_args.seed, "Shuffle seed");
  mix->add_option("--shuffle", mix_args.shuffle, "Shuffle after concatenation");
  mix->add_option("--workers", mix_args.workers, "Worker threads (0 = hardware)");
  mix->add_option("--manifest", mix_manifest, "Write the run manifest to this path");
  mix->callback([&] { rc = cmd_mix(mix_args, mix_manifest); });

  AlignTrainArgs at_args;
  std::string at_manifest;
  auto* at = app.add_subcommand("align-train", "Train the IBM Model 2 aligner");
  at->add_option("--config", config_path, "Key=value config file (flags override)");
  at->add_option("--bitext_source", at_args.bitext_source, "Source-side text file");
  at->add_option("--bitext_target", at_args.bitext_target, "Target-side text file");
  at->add_option("--model_out", at_args.model_out, "Model output path");
  at->add_option("--alignments_out", at_args.alignments_out,
                 "Optional Pharaoh-format alignment of the input bitext");
  at->add_option("--iterations", at_args.iterations, "EM iterations");
  at->add_option("--lambda", at_args.lambda, "Diagonal tension");
  at->add_option("--p_null", at_args.p_null, "Null-alignment probability");
  at->add_option("--optimize_lambda", at_args.optimize_lambda, "Gradient-update lambda");
  at->add_option("--workers", at_args.workers, "Worker threads (0 = hardware)");
  at->add_option("--manifest", at_manifest, "Write the run manifest to this path");
  at->callback([&] { rc = cmd_align_train(at_args, at_manifest); });

  IndexBuildArgs ib_args;
  std::string ib_manifest;
  auto* ib = app.add_subcommand("index-build", "Build the sentence ANN index");
  ib->add_option("--config", config_path, "Key=value config file (flags override)");
  ib->add_option("--bitext_source", ib_args.bitext_source, "Source-side text (fallback mode)");
  ib->add_option("--bitext_target", ib_args.bitext_target, "Target-side text (fallback mode)");
  ib->add_option("--embeddings", ib_args.embeddings, "Precomputed embeddings file");
  ib->add_option("--index_out", ib_args.index_out, "Index output path");
  ib->add_option("--embedding_dim", ib_args.embedding_dim, "Fallback embedder dimension");
  ib->add_option("--embedding_seed", ib_args.embedding_seed, "Fallback embedder seed");
  ib->add_option("--clusters", ib_args.clusters, "Clusters (0 = sqrt of corpus size)");
  ib->add_option("--seed", ib_args.seed, "k-means seed");
  ib->add_option("--max_iters", ib_args.max_iters, "k-means iteration cap");
  ib->add_option("--workers", ib_args.workers, "Worker threads (0 = hardware)");
  ib->add_option("--manifest", ib_manifest, "Write the run manifest to this path");
  ib->callback([&] { rc = cmd_index_build(ib_args, ib_manifest); });

  DedupArgs dd_args;
  std::string dd_manifest;
  auto* dd = app.add_subcommand("dedup", "Remove exact duplicate sentence pairs");
  dd->add_option("--config", config_path, "Key=value config file (flags override)");
  dd->add_option("--bitext_source", dd_args.bitext_source, "Source-side text file");
  dd->add_option("--bitext_target", dd_args.bitext_target, "Target-side text file");
  dd->add_option("--output_source", dd_args.output_source, "Deduplicated source output");
  dd->add_option("--output_target", dd_args.output_target, "Deduplicated target output");
  dd->add_option("--workers", dd_args.workers, "Worker threads (0 = hardware)");
  dd->add_option("--manifest", dd_manifest, "Write the run manifest to this path");
  dd->callback([&] { rc = cmd_dedup(dd_args, dd_manifest); });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config_args(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
