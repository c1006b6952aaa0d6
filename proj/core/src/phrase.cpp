#include "dictaug/phrase.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <span>

#include "dictaug/corpusio.hpp"
#include "dictaug/error.hpp"
#include "dictaug/text.hpp"

namespace dictaug {

namespace {

struct SuffixRule {
  std::string_view suffix;
  Tag tag;
};

// Longest suffix first within each table.
constexpr std::array<SuffixRule, 31> kEnSuffixes = {{
    {"ectomy", Tag::NOUN}, {"ically", Tag::OTHER}, {"ology", Tag::NOUN},
    {"pathy", Tag::NOUN},  {"algia", Tag::NOUN},   {"ition", Tag::NOUN},
    {"ation", Tag::NOUN},  {"emia", Tag::NOUN},    {"itis", Tag::NOUN},
    {"osis", Tag::NOUN},   {"ness", Tag::NOUN},    {"ment", Tag::NOUN},
    {"ship", Tag::NOUN},   {"ence", Tag::NOUN},    {"ance", Tag::NOUN},
    {"hood", Tag::NOUN},   {"ical", Tag::ADJ},     {"able", Tag::ADJ},
    {"ible", Tag::ADJ},    {"less", Tag::ADJ},     {"tion", Tag::NOUN},
    {"sion", Tag::NOUN},   {"oma", Tag::NOUN},     {"ism", Tag::NOUN},
    {"ist", Tag::NOUN},    {"ity", Tag::NOUN},     {"ous", Tag::ADJ},
    {"ive", Tag::ADJ},     {"ful", Tag::ADJ},      {"ary", Tag::ADJ},
    {"ly", Tag::OTHER},
}};

constexpr std::array<SuffixRule, 25> kFrSuffixes = {{
    {"ectomie", Tag::NOUN}, {"pathie", Tag::NOUN}, {"logie", Tag::NOUN},
    {"ation", Tag::NOUN},   {"ition", Tag::NOUN},  {"émie", Tag::NOUN},
    {"isme", Tag::NOUN},    {"iste", Tag::NOUN},   {"euse", Tag::ADJ},
    {"ique", Tag::ADJ},     {"aire", Tag::ADJ},    {"able", Tag::ADJ},
    {"ible", Tag::ADJ},     {"elle", Tag::ADJ},    {"ité", Tag::NOUN},
    {"tion", Tag::NOUN},    {"sion", Tag::NOUN},   {"ment", Tag::NOUN},
    {"age", Tag::NOUN},     {"ose", Tag::NOUN},    {"ite", Tag::NOUN},
    {"eux", Tag::ADJ},      {"ive", Tag::ADJ},     {"al", Tag::ADJ},
    {"el", Tag::ADJ},
}};

std::optional<Tag> suffix_tag(const std::string& lower, const std::string& lang) {
  std::span<const SuffixRule> rules(kEnSuffixes);
  if (lang == "fr") rules = std::span<const SuffixRule>(kFrSuffixes);
  for (const auto& rule : rules) {
    // Require at least one extra leading character so the rule matches a
    // derived form, not the bare suffix.
    if (lower.size() > rule.suffix.size() && lower.ends_with(rule.suffix)) return rule.tag;
  }
  return std::nullopt;
}

bool is_all_punct(const std::vector<char32_t>& cps) {
  for (char32_t cp : cps) {
    if (is_letter_cp(cp) || is_digit_cp(cp)) return false;
  }
  return !cps.empty();
}

bool is_numeral(const std::vector<char32_t>& cps) {
  bool saw_digit = false;
  for (char32_t cp : cps) {
    if (is_digit_cp(cp)) {
      saw_digit = true;
    } else if (cp != '.' && cp != ',' && cp != '-' && cp != '/' && cp != ':' && cp != '%') {
      return false;
    }
  }
  return saw_digit;
}

constexpr std::array<const char*, 8> kTagNames = {"NOUN", "ADJ",  "DET",   "VERB",
                                                  "ADP",  "NUM",  "PUNCT", "OTHER"};

} // namespace

const char* tag_name(Tag tag) { return kTagNames[static_cast<size_t>(tag)]; }

std::optional<Tag> tag_from_name(std::string_view name) {
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    if (name == kTagNames[i]) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

TagLexicon TagLexicon::load(const std::filesystem::path& path, std::string lang) {
  auto lines = read_lines(path);
  TagLexicon lex;
  lex.lang_ = std::move(lang);
  std::unordered_map<std::string, uint64_t> best_count;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      ++lex.skipped_rows_;
      continue;
    }
    const std::string token = fold_lower(line.substr(0, t1));
    const auto tag = tag_from_name(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    const std::string_view count_sv = std::string_view(line).substr(t2 + 1);
    uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(count_sv.data(), count_sv.data() + count_sv.size(), count);
    if (token.empty() || !tag || ec != std::errc() || ptr != count_sv.data() + count_sv.size()) {
      ++lex.skipped_rows_;
      continue;
    }
    auto it = best_count.find(token);
    if (it == best_count.end() || count > it->second) {
      best_count[token] = count;
      lex.tags_[token] = *tag;
    }
  }
  return lex;
}

TagLexicon TagLexicon::from_entries(const std::vector<std::pair<std::string, Tag>>& entries,
                                    std::string lang) {
  TagLexicon lex;
  lex.lang_ = std::move(lang);
  for (const auto& [token, tag] : entries) lex.tags_[fold_lower(token)] = tag;
  return lex;
}

std::optional<Tag> TagLexicon::lookup(std::string_view token) const {
  const auto it = tags_.find(fold_lower(token));
  if (it == tags_.end()) return std::nullopt;
  return it->second;
}

std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens,
                                 const TagLexicon& lexicon) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    Tag tag = Tag::OTHER;
    const auto cps = decode_utf8(token);
    if (is_all_punct(cps)) {
      tag = Tag::PUNCT;
    } else if (is_numeral(cps)) {
      tag = Tag::NUM;
    } else if (const auto hit = lexicon.lookup(token)) {
      tag = *hit;
    } else {
      const std::string lower = fold_lower(token);
      if (const auto by_suffix = suffix_tag(lower, lexicon.lang())) {
        tag = *by_suffix;
      } else if (i > 0 && !cps.empty() && is_letter_cp(cps[0]) && to_lower_cp(cps[0]) != cps[0]) {
        // Capitalized past the sentence start: most likely a proper noun.
        tag = Tag::NOUN;
      }
    }
    out.push_back({token, tag});
  }
  return out;
}

std::vector<PhraseSpan> extract_noun_phrases(const std::vector<TaggedToken>& tagged,
                                             uint32_t max_len) {
  // Equivalent to enumerating maximal (ADJ|NOUN|NUM)* NOUN chunks and their
  // NOUN-final sub-spans: every span of chunkable tags ending in NOUN, capped
  // at max_len tokens.
  const auto chunkable = [](Tag t) { return t == Tag::NOUN || t == Tag::ADJ || t == Tag::NUM; };

  std::vector<PhraseSpan> spans;
  const uint32_t n = static_cast<uint32_t>(tagged.size());
  for (uint32_t start = 0; start < n; ++start) {
    for (uint32_t end = start + 1; end <= n && end - start <= max_len; ++end) {
      if (!chunkable(tagged[end - 1].tag)) break;
      if (tagged[end - 1].tag != Tag::NOUN) continue;
      PhraseSpan span;
      span.start = start;
      span.end = end;
      for (uint32_t i = start; i < end; ++i) {
        if (i > start) span.surface += ' ';
        span.surface += tagged[i].token;
      }
      spans.push_back(std::move(span));
    }
  }
  return spans;
}

std::optional<PhraseMatch> top_sim(const Vec& src_embedding, const std::vector<PhraseSpan>& spans,
                                   const SpanEmbedder& embedder) {
  std::optional<PhraseMatch> best;
  for (const auto& span : spans) {
    const double score = cosine(src_embedding, embedder(span.surface));
    if (!best) {
      best = PhraseMatch{span, score};
      continue;
    }
    const auto better = [&] {
      if (score != best->score) return score > best->score;
      if (span.start != best->span.start) return span.start < best->span.start;
      return span.end - span.start < best->span.end - best->span.start;
    };
    if (better()) best = PhraseMatch{span, score};
  }
  return best;
}

} // namespace dictaug
