#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dictaug/align.hpp"
#include "dictaug/annindex.hpp"
#include "dictaug/corpusio.hpp"
#include "dictaug/coverage.hpp"
#include "dictaug/embedding.hpp"
#include "dictaug/phrase.hpp"
#include "dictaug/substitute.hpp"

#include "json.hpp"

namespace dictaug {

// All knobs of the generation pipeline. Flat snake_case names double as the
// --config file keys of the CLI.
struct PipelineConfig {
  // inputs / outputs
  std::string bitext_source;
  std::string bitext_target;
  std::string dictionary;
  std::string embeddings; // empty: deterministic fallback embedder
  std::string lexicon;    // tag lexicon TSV for the source language; may be empty
  std::string output_dir;
  std::string cache_dir; // empty: <output_dir>/cache
  std::string source_lang = "en";
  std::string target_lang = "fr";

  // generation
  uint64_t top_n = 5;
  uint64_t max_pairs = 0; // 0: unbounded; truncation in entry order
  double sim_floor = 0.0; // <= 0: disabled
  uint64_t phrase_max_len = 5;
  bool keep_identity = true;
  bool dedup_input = false;
  bool dedup_output = true;
  bool mix_with_ood = false;
  bool retain_pairs = true; // keep generated pairs in memory on return

  // fallback embedder
  uint64_t embedding_dim = 64;
  uint64_t embedding_seed = 42;

  // ANN index
  uint64_t ann_clusters = 0; // 0: floor(sqrt(count))
  uint64_t ann_nprobe = 8;   // clamped to the cluster count at search time
  uint64_t ann_seed = 42;
  uint64_t ann_max_iters = 15;

  // alignment
  uint64_t align_iterations = 5;
  double align_lambda = 4.0;
  double align_p_null = 0.08;
  bool align_optimize_lambda = false;

  // mixing
  uint64_t mix_seed = 42;
  bool mix_shuffle = true;

  uint64_t workers = 0;

  // ConfigError on missing paths or out-of-range values.
  void validate(bool require_dictionary = true) const;
  nlohmann::json to_json() const;
};

struct RunManifest {
  nlohmann::json doc = nlohmann::json::object();

  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);

  // The document with volatile fields (timings) removed, for determinism
  // comparisons.
  nlohmann::json stable_view() const;
};

struct GenerateResult {
  PseudoCorpus corpus; // pairs populated only when config.retain_pairs
  RunManifest manifest;
  std::filesystem::path source_path;
  std::filesystem::path target_path;
  std::filesystem::path provenance_path;
  std::filesystem::path manifest_path;
};

// Loads inputs, builds or reuses the cached index and alignment model, runs
// the per-entry generation loop in dictionary order and streams output files.
GenerateResult run_generate(const PipelineConfig& config);

// Same, with the dictionary supplied in memory (may be empty; the path
// overload goes through load_dictionary, which rejects empty files).
GenerateResult run_generate(const PipelineConfig& config, const DomainDictionary& dict);

// Coverage job over single-side text files (primary corpus vs comparisons).
struct CoverageJob {
  std::string dictionary;
  std::string testset;
  std::string corpus;               // primary
  std::vector<std::string> compare; // optional comparison corpora
  std::string output_dir;
  DictionarySide side = DictionarySide::Source;
  bool fold_case = false;
  std::string format = "json"; // json | csv | both
  uint64_t workers = 0;

  void validate() const;
};

struct CoverageRunResult {
  CoverageReport primary;
  std::vector<CoverageReport> comparisons;
  std::vector<CoverageGain> gains; // primary over each comparison
  std::vector<TermDiff> diffs;
  RunManifest manifest;
};

CoverageRunResult run_coverage(const CoverageJob& job);

// Concatenates, optionally shuffles with a fixed seed, reassigns ids.
// Language tags must agree.
Bitext mix_corpora(const Bitext& ood, const PseudoCorpus& pseudo, uint64_t shuffle_seed,
                   bool shuffle = true);

// Streaming FNV-1a over file bytes, as a 16-digit hex string.
std::string checksum_file(const std::filesystem::path& path);

} // namespace dictaug
