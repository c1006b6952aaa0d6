#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dictaug {

// One aligned line pair of a bitext. `id` equals the 0-based position in the
// owning Bitext; `source`/`target` hold normalized tokens, the raw_* fields
// keep the original line text.
struct SentencePair {
  uint32_t id = 0;
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::string raw_source;
  std::string raw_target;
};

struct Bitext {
  std::vector<SentencePair> pairs;
  std::string source_lang;
  std::string target_lang;
  // Line pairs dropped at load because one side tokenized to empty.
  uint64_t dropped_empty = 0;

  size_t size() const { return pairs.size(); }
};

// A (source term, target term) pair from the domain dictionary, normalized
// and tokenized with the same rules as the bitext.
struct DictionaryEntry {
  std::vector<std::string> src;
  std::vector<std::string> tgt;

  bool operator==(const DictionaryEntry& o) const { return src == o.src && tgt == o.tgt; }
};

struct DomainDictionary {
  std::vector<DictionaryEntry> entries;
  std::string name;
  uint64_t skipped_rows = 0;   // rows without exactly two columns, or empty after tokenization
  uint64_t duplicate_rows = 0; // exact (src, tgt) duplicates collapsed

  size_t size() const { return entries.size(); }
};

// Maps Unicode punctuation variants (curly quotes, dashes, ellipsis,
// non-breaking spaces) to their ASCII forms, collapses whitespace runs and
// strips leading/trailing whitespace. Idempotent; requires valid UTF-8.
std::string normalize(std::string_view text);

// Whitespace split followed by detachment of clause punctuation
// (. , ; : ! ? ( ) " ') at token edges. Intra-word hyphens stay attached;
// apostrophes are kept inside contractions ("don't") and split after
// elision prefixes ("l'infection" -> "l'", "infection"). Expects normalized
// input; never produces empty tokens.
std::vector<std::string> tokenize(std::string_view normalized);

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// Loads two line-aligned text files. Hard error if line counts differ or a
// file is unreadable / not UTF-8. Pairs where either side tokenizes to empty
// are dropped and counted in Bitext::dropped_empty. Normalization runs in
// parallel over lines; results are assembled in input order.
Bitext load_bitext(const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path,
                   std::string source_lang = "src", std::string target_lang = "tgt",
                   size_t workers = 0);

// Loads a two-column TSV dictionary (source<TAB>target). Rows with a column
// count other than two are skipped and counted; exact duplicates are
// collapsed. Hard error if the result is empty.
DomainDictionary load_dictionary(const std::filesystem::path& path);

// Keeps the first occurrence of each exact (raw_source, raw_target) pair.
// Ids are reassigned to positions in the surviving order.
Bitext deduplicate(const Bitext& bitext, uint64_t* removed = nullptr);

enum class WriteMode {
  Tokenized, // one space-joined token line per pair; round-trips through load_bitext
  Raw,       // original line text
};

void write_bitext(const Bitext& bitext, const std::filesystem::path& source_path,
                  const std::filesystem::path& target_path,
                  WriteMode mode = WriteMode::Tokenized);

// Reads a whole UTF-8 text file into lines (used by coverage and tools).
// Handles trailing newline and CRLF; hard error on unreadable files.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// read_lines + normalize + tokenize per line, in parallel, order preserved.
// Empty lines yield empty token vectors.
std::vector<std::vector<std::string>> load_tokenized_lines(const std::filesystem::path& path,
                                                           size_t workers = 0);

} // namespace dictaug
