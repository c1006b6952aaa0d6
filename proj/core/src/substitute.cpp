#include "dictaug/substitute.hpp"

#include <fstream>
#include <unordered_set>

#include "dictaug/error.hpp"
#include "dictaug/text.hpp"

namespace dictaug {

namespace {

// Exact inverse of join_tokens (tokens never contain spaces).
std::vector<std::string> split_tokens(const std::string& joined) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= joined.size()) {
    const size_t space = joined.find(' ', pos);
    if (space == std::string::npos) {
      if (pos < joined.size()) out.push_back(joined.substr(pos));
      break;
    }
    out.push_back(joined.substr(pos, space - pos));
    pos = space + 1;
  }
  return out;
}

std::vector<std::string> splice(const std::vector<std::string>& tokens, uint32_t start,
                                uint32_t end, const std::vector<std::string>& replacement) {
  std::vector<std::string> out;
  out.reserve(tokens.size() - (end - start) + replacement.size());
  out.insert(out.end(), tokens.begin(), tokens.begin() + start);
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), tokens.begin() + end, tokens.end());
  // Sentence-initial position keeps its capitalization when the replacement
  // itself is lowercase.
  if (start == 0 && !replacement.empty() && starts_lowercase(replacement.front())) {
    out.front() = capitalize_first(out.front());
  }
  return out;
}

} // namespace

PseudoPair substitute_pair(const SentencePair& tmpl, const PhraseMatch& match,
                           std::pair<uint32_t, uint32_t> tgt_span, const DictionaryEntry& entry) {
  const auto& span = match.span;
  if (span.start >= span.end || span.end > tmpl.source.size()) {
    throw Error("substitute_pair: source span [" + std::to_string(span.start) + ", " +
                std::to_string(span.end) + ") out of bounds for sentence " +
                std::to_string(tmpl.id));
  }
  if (tgt_span.first >= tgt_span.second || tgt_span.second > tmpl.target.size()) {
    throw Error("substitute_pair: target span [" + std::to_string(tgt_span.first) + ", " +
                std::to_string(tgt_span.second) + ") out of bounds for sentence " +
                std::to_string(tmpl.id));
  }

  PseudoPair out;
  out.g_source = splice(tmpl.source, span.start, span.end, entry.src);
  out.g_target = splice(tmpl.target, tgt_span.first, tgt_span.second, entry.tgt);
  out.provenance.template_id = tmpl.id;
  out.provenance.entry = entry;
  out.provenance.src_start = span.start;
  out.provenance.src_end = span.end;
  out.provenance.tgt_start = tgt_span.first;
  out.provenance.tgt_end = tgt_span.second;
  out.provenance.similarity = match.score;
  out.provenance.identity = out.g_source == tmpl.source && out.g_target == tmpl.target;
  return out;
}

std::string pseudo_pair_key(const std::vector<std::string>& g_source,
                            const std::vector<std::string>& g_target) {
  std::string key = join_tokens(g_source);
  key += '\x1f';
  key += join_tokens(g_target);
  return key;
}

PseudoCorpus dedup_pseudo(PseudoCorpus corpus) {
  std::unordered_set<std::string> seen;
  seen.reserve(corpus.pairs.size());
  std::vector<PseudoPair> kept;
  kept.reserve(corpus.pairs.size());
  for (auto& pair : corpus.pairs) {
    if (seen.insert(pseudo_pair_key(pair.g_source, pair.g_target)).second) {
      kept.push_back(std::move(pair));
    } else {
      ++corpus.stats.deduped;
    }
  }
  corpus.pairs = std::move(kept);
  corpus.stats.generated = corpus.pairs.size();
  return corpus;
}

nlohmann::json provenance_to_json(const Provenance& p) {
  return nlohmann::json{
      {"template_id", p.template_id},
      {"src_span", {p.src_start, p.src_end}},
      {"tgt_span", {p.tgt_start, p.tgt_end}},
      {"dictionary_src", join_tokens(p.entry.src)},
      {"dictionary_tgt", join_tokens(p.entry.tgt)},
      {"similarity_score", p.similarity},
      {"identity", p.identity},
  };
}

Provenance provenance_from_json(const nlohmann::json& j) {
  Provenance p;
  p.template_id = j.at("template_id").get<uint64_t>();
  p.src_start = j.at("src_span").at(0).get<uint32_t>();
  p.src_end = j.at("src_span").at(1).get<uint32_t>();
  p.tgt_start = j.at("tgt_span").at(0).get<uint32_t>();
  p.tgt_end = j.at("tgt_span").at(1).get<uint32_t>();
  p.entry.src = split_tokens(j.at("dictionary_src").get<std::string>());
  p.entry.tgt = split_tokens(j.at("dictionary_tgt").get<std::string>());
  p.similarity = j.at("similarity_score").get<double>();
  p.identity = j.at("identity").get<bool>();
  return p;
}

void write_pseudo_corpus(const PseudoCorpus& corpus, const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path,
                         const std::filesystem::path& provenance_path) {
  std::ofstream src(source_path, std::ios::binary);
  if (!src) throw Error("cannot open for writing: " + source_path.string());
  std::ofstream tgt(target_path, std::ios::binary);
  if (!tgt) throw Error("cannot open for writing: " + target_path.string());
  std::ofstream prov(provenance_path, std::ios::binary);
  if (!prov) throw Error("cannot open for writing: " + provenance_path.string());
  for (const auto& pair : corpus.pairs) {
    src << join_tokens(pair.g_source) << '\n';
    tgt << join_tokens(pair.g_target) << '\n';
    prov << provenance_to_json(pair.provenance).dump() << '\n';
  }
  if (!src.flush()) throw Error("write failed: " + source_path.string());
  if (!tgt.flush()) throw Error("write failed: " + target_path.string());
  if (!prov.flush()) throw Error("write failed: " + provenance_path.string());
}

std::vector<Provenance> read_provenance(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<Provenance> out;
  out.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    nlohmann::json j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) {
      throw Error("invalid provenance JSON at " + path.string() + ":" + std::to_string(i + 1));
    }
    out.push_back(provenance_from_json(j));
  }
  return out;
}

} // namespace dictaug
