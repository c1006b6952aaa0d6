#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dictaug/embedding.hpp"

namespace dictaug {

enum class Tag : uint8_t { NOUN, ADJ, DET, VERB, ADP, NUM, PUNCT, OTHER };

const char* tag_name(Tag tag);
std::optional<Tag> tag_from_name(std::string_view name);

struct TaggedToken {
  std::string token;
  Tag tag = Tag::OTHER;
};

// Candidate phrase: token span [start, end) with 1 <= end - start <= 5 and a
// NOUN-final tag sequence. surface is the space-joined token text.
struct PhraseSpan {
  uint32_t start = 0;
  uint32_t end = 0;
  std::string surface;
};

struct PhraseMatch {
  PhraseSpan span;
  double score = 0.0; // cosine similarity to the dictionary term embedding
};

// TSV tag lexicon: token<TAB>TAG<TAB>count, case-insensitive lookup, the
// highest-count tag wins per token. Malformed rows are skipped and counted.
class TagLexicon {
public:
  static TagLexicon load(const std::filesystem::path& path, std::string lang);

  // Test/fixture constructor.
  static TagLexicon from_entries(const std::vector<std::pair<std::string, Tag>>& entries,
                                 std::string lang);

  const std::string& lang() const { return lang_; }
  size_t size() const { return tags_.size(); }
  uint64_t skipped_rows() const { return skipped_rows_; }
  std::optional<Tag> lookup(std::string_view token) const;

private:
  std::string lang_;
  std::unordered_map<std::string, Tag> tags_;
  uint64_t skipped_rows_ = 0;
};

// Rule cascade per token: punctuation -> PUNCT, numerals -> NUM, lexicon
// lookup, language suffix rules, capitalized mid-sentence -> NOUN, else
// OTHER. Total and deterministic for a fixed lexicon.
std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens, const TagLexicon& lexicon);

// All spans with every tag in {ADJ, NOUN, NUM}, a NOUN in final position and
// length <= max_len: the NOUN-final sub-spans of the maximal
// (ADJ|NOUN|NUM)* NOUN chunks. Ordered by (start, end), duplicate-free.
std::vector<PhraseSpan> extract_noun_phrases(const std::vector<TaggedToken>& tagged,
                                             uint32_t max_len = 5);

// Supplies a vector for a span surface (store lookup or fallback embedding).
using SpanEmbedder = std::function<Vec(const std::string& surface)>;

// The span maximizing cosine(src_embedding, E(surface)); ties to the earlier
// start, then the shorter span. nullopt when spans is empty.
std::optional<PhraseMatch> top_sim(const Vec& src_embedding, const std::vector<PhraseSpan>& spans,
                                   const SpanEmbedder& embedder);

} // namespace dictaug
