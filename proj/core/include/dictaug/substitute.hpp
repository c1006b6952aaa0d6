#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dictaug/corpusio.hpp"
#include "dictaug/phrase.hpp"

#include "json.hpp"

namespace dictaug {

// Everything needed to trace a generated pair back to its template and undo
// the substitution.
struct Provenance {
  uint64_t template_id = 0;
  DictionaryEntry entry;
  uint32_t src_start = 0; // replaced source span in the template, [start, end)
  uint32_t src_end = 0;
  uint32_t tgt_start = 0;
  uint32_t tgt_end = 0;
  double similarity = 0.0;
  bool identity = false;
};

struct PseudoPair {
  std::vector<std::string> g_source;
  std::vector<std::string> g_target;
  Provenance provenance;
};

struct GenerationStats {
  uint64_t attempted = 0;
  uint64_t generated = 0;
  uint64_t skipped_no_embedding = 0;
  uint64_t skipped_no_phrase = 0;
  uint64_t skipped_below_floor = 0;
  uint64_t skipped_no_projection = 0;
  uint64_t skipped_identity = 0;
  uint64_t deduped = 0;

  uint64_t skipped_total() const {
    return skipped_no_embedding + skipped_no_phrase + skipped_below_floor +
           skipped_no_projection + skipped_identity;
  }
  // attempted == generated + skips + deduped, checked by tests and manifests.
  bool consistent() const { return attempted == generated + skipped_total() + deduped; }
};

struct PseudoCorpus {
  std::vector<PseudoPair> pairs;
  GenerationStats stats;
  std::string source_lang;
  std::string target_lang;
};

// Replace match.span in the template source with entry.src and tgt_span in
// the target with entry.tgt. Sentence-initial replacements of a lowercase
// entry get their first token capitalized.
PseudoPair substitute_pair(const SentencePair& tmpl, const PhraseMatch& match,
                           std::pair<uint32_t, uint32_t> tgt_span, const DictionaryEntry& entry);

// Collapse exact (g_source, g_target) duplicates to the first occurrence.
PseudoCorpus dedup_pseudo(PseudoCorpus corpus);

// Key used for output deduplication.
std::string pseudo_pair_key(const std::vector<std::string>& g_source,
                            const std::vector<std::string>& g_target);

nlohmann::json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::json& j);

// Tokenized source/target text plus a JSON-lines provenance sidecar.
void write_pseudo_corpus(const PseudoCorpus& corpus, const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path,
                         const std::filesystem::path& provenance_path);

std::vector<Provenance> read_provenance(const std::filesystem::path& path);

} // namespace dictaug
