#include "dictaug/corpusio.hpp"

#include <array>
#include <fstream>
#include <unordered_set>

#include "dictaug/error.hpp"
#include "dictaug/text.hpp"
#include "dictaug/util.hpp"

namespace dictaug {

namespace {

// Punctuation replacement table, the subset of the Moses normalization rules
// that affects tokenization and phrase matching. Context-free entries only;
// the directional single quotes get the contextual rule below.
struct CpReplacement {
  char32_t from;
  const char* to;
};

constexpr std::array<CpReplacement, 17> kPunctTable = {{
    {0x201C, "\""},  // left double quotation mark
    {0x201D, "\""},  // right double quotation mark
    {0x201E, "\""},  // double low-9 quotation mark
    {0x201A, "\""},  // single low-9 quotation mark
    {0x00AB, "\""},  // left guillemet
    {0x00BB, "\""},  // right guillemet
    {0x2013, "-"},   // en dash
    {0x2014, " - "}, // em dash
    {0x2026, "..."}, // horizontal ellipsis
    {0x00B4, "'"},   // acute accent
    {0x0060, "'"},   // grave accent (backtick)
    {0x2212, "-"},   // minus sign
    {0x00A0, " "},   // no-break space
    {0x202F, " "},   // narrow no-break space
    {0x2009, " "},   // thin space
    {0xFEFF, ""},    // BOM
    {0x200B, ""},    // zero-width space
}};

const char* lookup_replacement(char32_t cp) {
  for (const auto& r : kPunctTable) {
    if (r.from == cp) return r.to;
  }
  return nullptr;
}

// Punctuation detached at token edges by the tokenizer.
bool is_detachable(char32_t cp) {
  switch (cp) {
    case U'.':
    case U',':
    case U';':
    case U':':
    case U'!':
    case U'?':
    case U'(':
    case U')':
    case U'"':
    case U'\'':
      return true;
    default:
      return false;
  }
}

// French elision prefixes; an apostrophe after one of these closes the token
// ("l'" + "infection"). Case-insensitive.
bool is_elision_prefix(const std::vector<char32_t>& cps, size_t begin, size_t end) {
  static const std::vector<std::u32string> kPrefixes = {
      U"l", U"d", U"j", U"n", U"m", U"s", U"t", U"c",
      U"qu", U"jusqu", U"lorsqu", U"puisqu", U"quoiqu"};
  const size_t len = end - begin;
  for (const auto& p : kPrefixes) {
    if (p.size() != len) continue;
    bool match = true;
    for (size_t i = 0; i < len; ++i) {
      if (to_lower_cp(cps[begin + i]) != p[i]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

void emit_chunk_tokens(const std::vector<char32_t>& cps, size_t begin, size_t end,
                       std::vector<std::string>& out) {
  if (begin >= end) return;

  // Peel leading detachable punctuation.
  while (begin < end && is_detachable(cps[begin]) && end - begin > 1) {
    // A leading apostrophe followed by letters is peeled too; elisions keep
    // the apostrophe on the *left* side of the split, never the right.
    out.push_back(encode_utf8({cps[begin]}));
    ++begin;
  }

  // Peel trailing detachable punctuation, collecting in reverse.
  std::vector<char32_t> tail;
  while (begin < end && end - begin > 1 && is_detachable(cps[end - 1])) {
    // Keep a final apostrophe attached when it completes an elision token
    // ("l'" re-tokenizes to itself).
    if (cps[end - 1] == U'\'' && is_elision_prefix(cps, begin, end - 1)) break;
    tail.push_back(cps[end - 1]);
    --end;
  }

  // Body: split after internal elision apostrophes, keep other apostrophes
  // and hyphens attached.
  size_t start = begin;
  for (size_t i = begin; i + 1 < end; ++i) {
    if (cps[i] == U'\'' && i + 1 > start && is_letter_cp(cps[i + 1]) &&
        is_elision_prefix(cps, start, i)) {
      out.push_back(encode_utf8(std::vector<char32_t>(cps.begin() + static_cast<long>(start),
                                                      cps.begin() + static_cast<long>(i + 1))));
      start = i + 1;
    }
  }
  if (start < end) {
    out.push_back(encode_utf8(std::vector<char32_t>(cps.begin() + static_cast<long>(start),
                                                    cps.begin() + static_cast<long>(end))));
  }
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
    out.push_back(encode_utf8({*it}));
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for reading: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  return out;
}

} // namespace

std::string normalize(std::string_view text) {
  const auto cps = decode_utf8(text);
  std::string buf;
  buf.reserve(text.size());

  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (cp == 0x2018 || cp == 0x2019) {
      // Directional single quotes: apostrophe between letters, double quote
      // otherwise (the Moses rule).
      const bool between_letters = i > 0 && i + 1 < cps.size() && is_letter_cp(cps[i - 1]) &&
                                   is_letter_cp(cps[i + 1]);
      buf += between_letters ? "'" : "\"";
      continue;
    }
    if (const char* rep = lookup_replacement(cp)) {
      buf += rep;
      continue;
    }
    if (is_space_cp(cp)) {
      buf.push_back(' ');
      continue;
    }
    append_utf8(cp, buf);
  }

  // Collapse whitespace runs and trim.
  std::string out;
  out.reserve(buf.size());
  bool pending_space = false;
  for (char c : buf) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  const auto cps = decode_utf8(normalized);
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space_cp(cps[i])) ++i;
    size_t j = i;
    while (j < cps.size() && !is_space_cp(cps[j])) ++j;
    if (j > i) emit_chunk_tokens(cps, i, j, tokens);
    i = j;
  }
  return tokens;
}

Bitext load_bitext(const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path, std::string source_lang,
                   std::string target_lang, size_t workers) {
  const auto src_lines = read_lines(source_path);
  const auto tgt_lines = read_lines(target_path);
  if (src_lines.size() != tgt_lines.size()) {
    throw Error("bitext line count mismatch: " + source_path.string() + " has " +
                std::to_string(src_lines.size()) + " lines, " + target_path.string() + " has " +
                std::to_string(tgt_lines.size()));
  }

  const size_t n = src_lines.size();
  std::vector<SentencePair> staged(n);
  std::vector<std::string> errors(resolve_workers(workers));

  parallel_chunks(n, workers, [&](size_t chunk, size_t begin, size_t end) {
    try {
      for (size_t k = begin; k < end; ++k) {
        SentencePair& p = staged[k];
        p.raw_source = src_lines[k];
        p.raw_target = tgt_lines[k];
        p.source = tokenize(normalize(p.raw_source));
        p.target = tokenize(normalize(p.raw_target));
      }
    } catch (const std::exception& e) {
      errors[chunk] = e.what();
    }
  });
  for (const auto& err : errors) {
    if (!err.empty()) {
      throw Error("while loading " + source_path.string() + " / " + target_path.string() + ": " +
                  err);
    }
  }

  Bitext bitext;
  bitext.source_lang = std::move(source_lang);
  bitext.target_lang = std::move(target_lang);
  bitext.pairs.reserve(n);
  for (auto& p : staged) {
    if (p.source.empty() || p.target.empty()) {
      ++bitext.dropped_empty;
      continue;
    }
    p.id = static_cast<uint32_t>(bitext.pairs.size());
    bitext.pairs.push_back(std::move(p));
  }
  return bitext;
}

std::vector<std::vector<std::string>> load_tokenized_lines(const std::filesystem::path& path,
                                                           size_t workers) {
  const auto lines = read_lines(path);
  std::vector<std::vector<std::string>> tokens(lines.size());
  std::vector<std::string> errors(resolve_workers(workers));
  parallel_chunks(lines.size(), workers, [&](size_t chunk, size_t begin, size_t end) {
    try {
      for (size_t k = begin; k < end; ++k) tokens[k] = tokenize(normalize(lines[k]));
    } catch (const std::exception& e) {
      errors[chunk] = e.what();
    }
  });
  for (const auto& err : errors) {
    if (!err.empty()) throw Error("while loading " + path.string() + ": " + err);
  }
  return tokens;
}

DomainDictionary load_dictionary(const std::filesystem::path& path) {
  DomainDictionary dict;
  dict.name = path.stem().string();

  std::unordered_set<std::string> seen;
  for (const auto& line : read_lines(path)) {
    if (line.empty()) {
      ++dict.skipped_rows;
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      ++dict.skipped_rows;
      continue;
    }
    DictionaryEntry entry;
    entry.src = tokenize(normalize(std::string_view(line).substr(0, tab)));
    entry.tgt = tokenize(normalize(std::string_view(line).substr(tab + 1)));
    if (entry.src.empty() || entry.tgt.empty()) {
      ++dict.skipped_rows;
      continue;
    }
    std::string key = join_tokens(entry.src);
    key.push_back('\t');
    key += join_tokens(entry.tgt);
    if (!seen.insert(std::move(key)).second) {
      ++dict.duplicate_rows;
      continue;
    }
    dict.entries.push_back(std::move(entry));
  }

  if (dict.entries.empty()) {
    throw Error("dictionary is empty after loading: " + path.string());
  }
  return dict;
}

Bitext deduplicate(const Bitext& bitext, uint64_t* removed) {
  Bitext out;
  out.source_lang = bitext.source_lang;
  out.target_lang = bitext.target_lang;
  out.dropped_empty = bitext.dropped_empty;

  std::unordered_set<std::string> seen;
  seen.reserve(bitext.pairs.size() * 2);
  uint64_t dropped = 0;
  for (const auto& p : bitext.pairs) {
    std::string key = p.raw_source;
    key.push_back('\x1e');
    key += p.raw_target;
    if (!seen.insert(std::move(key)).second) {
      ++dropped;
      continue;
    }
    SentencePair copy = p;
    copy.id = static_cast<uint32_t>(out.pairs.size());
    out.pairs.push_back(std::move(copy));
  }
  if (removed) *removed = dropped;
  return out;
}

void write_bitext(const Bitext& bitext, const std::filesystem::path& source_path,
                  const std::filesystem::path& target_path, WriteMode mode) {
  auto src = open_output(source_path);
  auto tgt = open_output(target_path);
  for (const auto& p : bitext.pairs) {
    if (mode == WriteMode::Tokenized) {
      src << join_tokens(p.source) << '\n';
      tgt << join_tokens(p.target) << '\n';
    } else {
      src << p.raw_source << '\n';
      tgt << p.raw_target << '\n';
    }
  }
  src.flush();
  tgt.flush();
  if (!src) throw Error("write failed: " + source_path.string());
  if (!tgt) throw Error("write failed: " + target_path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_valid_utf8(line)) {
      throw Error(path.string() + ":" + std::to_string(lines.size() + 1) +
                  ": invalid UTF-8 input");
    }
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error("I/O error while reading: " + path.string());
  return lines;
}

} // namespace dictaug
