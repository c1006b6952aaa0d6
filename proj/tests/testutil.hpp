#pragma once

// Shared test fixtures: scratch directories, file helpers, and the toy
// domain used by the pipeline tests and the acceptance suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dictaug/corpusio.hpp"
#include "dictaug/util.hpp"

namespace testutil {

class TempDir {
public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "dictaug_test_XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Monotone one-to-one bitext over a bijective s<i> -> t<i> lexicon: every
// sentence pair has equal length and gold link (j, j) at each position.
inline dictaug::Bitext make_monotone_bitext(size_t n_pairs, size_t vocab, uint64_t seed) {
  dictaug::DetRng rng(seed);
  dictaug::Bitext bitext;
  bitext.source_lang = "src";
  bitext.target_lang = "tgt";
  bitext.pairs.reserve(n_pairs);
  for (size_t p = 0; p < n_pairs; ++p) {
    const size_t len = 3 + rng.next_below(6);
    dictaug::SentencePair pair;
    pair.id = static_cast<uint32_t>(p);
    for (size_t j = 0; j < len; ++j) {
      const size_t w = rng.next_below(static_cast<uint64_t>(vocab));
      pair.source.push_back("s" + std::to_string(w));
      pair.target.push_back("t" + std::to_string(w));
    }
    pair.raw_source = dictaug::join_tokens(pair.source);
    pair.raw_target = dictaug::join_tokens(pair.target);
    bitext.pairs.push_back(std::move(pair));
  }
  return bitext;
}

// The toy domain: a 200-pair OOD bitext with token-parallel EN/FR sentences,
// a 20-entry medical dictionary whose tokens never occur in the bitext, an
// English tag lexicon covering the bitext vocabulary, and a test set that
// contains ten dictionary source terms verbatim.
struct ToyFixture {
  std::filesystem::path ood_src, ood_tgt;
  std::filesystem::path dict_path;
  std::filesystem::path lexicon_path;
  std::filesystem::path test_path;
  std::vector<std::pair<std::string, std::string>> dict; // joined surfaces
  std::vector<std::string> test_terms;                   // dict src terms present in the test set
};

inline ToyFixture make_toy_fixture(const std::filesystem::path& dir, size_t n_pairs = 200,
                                   uint64_t seed = 11) {
  const std::vector<std::pair<std::string, std::string>> nouns = {
      {"patient", "patient"},   {"doctor", "médecin"},      {"nurse", "infirmière"},
      {"hospital", "hôpital"},  {"clinic", "clinique"},     {"symptom", "symptôme"},
      {"treatment", "traitement"}, {"dose", "dose"},        {"tablet", "comprimé"},
      {"result", "résultat"},   {"record", "dossier"},      {"sample", "échantillon"},
      {"report", "rapport"},    {"scan", "examen"},         {"ward", "service"},
      {"surgeon", "chirurgien"}, {"pharmacy", "pharmacie"}, {"bandage", "bandage"},
      {"monitor", "moniteur"},  {"chart", "tableau"}};
  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"sees", "voit"},     {"treats", "soigne"},  {"checks", "vérifie"},
      {"notes", "note"},    {"visits", "visite"},  {"calls", "appelle"}};
  const std::vector<std::pair<std::string, std::string>> adjectives = {
      {"new", "nouveau"}, {"young", "jeune"}, {"old", "vieux"}, {"small", "petit"},
      {"large", "grand"}};

  dictaug::DetRng rng(seed);
  std::string src_text, tgt_text;
  for (size_t i = 0; i < n_pairs; ++i) {
    const auto& n1 = nouns[rng.next_below(nouns.size())];
    const auto& n2 = nouns[rng.next_below(nouns.size())];
    const auto& v = verbs[rng.next_below(verbs.size())];
    if (rng.next_below(2) == 0) {
      const auto& a = adjectives[rng.next_below(adjectives.size())];
      src_text += "the " + a.first + " " + n1.first + " " + v.first + " the " + n2.first + " .\n";
      tgt_text += "le " + a.second + " " + n1.second + " " + v.second + " le " + n2.second + " .\n";
    } else {
      src_text += "the " + n1.first + " " + v.first + " the " + n2.first + " .\n";
      tgt_text += "le " + n1.second + " " + v.second + " le " + n2.second + " .\n";
    }
  }

  ToyFixture fx;
  fx.ood_src = dir / "ood.en";
  fx.ood_tgt = dir / "ood.fr";
  write_file(fx.ood_src, src_text);
  write_file(fx.ood_tgt, tgt_text);

  fx.dict = {{"mucositis", "mucite"},
             {"dry mouth", "bouche sèche"},
             {"kidney stone", "calcul rénal"},
             {"liver biopsy", "biopsie du foie"},
             {"heart failure", "insuffisance cardiaque"},
             {"lung infection", "infection pulmonaire"},
             {"skin rash", "éruption cutanée"},
             {"blood pressure", "tension artérielle"},
             {"bone fracture", "fracture osseuse"},
             {"muscle pain", "douleur musculaire"},
             {"epistaxis", "épistaxis"},
             {"folliculitis", "folliculite"},
             {"anemia", "anémie"},
             {"vertigo", "vertige"},
             {"nausea", "nausée"},
             {"asthma", "asthme"},
             {"eczema", "eczéma"},
             {"chest pain", "douleur thoracique"},
             {"dry cough", "toux sèche"},
             {"stomach ulcer", "ulcère gastrique"}};
  std::string dict_text;
  for (const auto& [s, t] : fx.dict) dict_text += s + "\t" + t + "\n";
  fx.dict_path = dir / "dict.tsv";
  write_file(fx.dict_path, dict_text);

  std::string lex_text = "the\tDET\t1000\n";
  for (const auto& [en, fr] : nouns) lex_text += en + "\tNOUN\t100\n";
  for (const auto& [en, fr] : verbs) lex_text += en + "\tVERB\t100\n";
  for (const auto& [en, fr] : adjectives) lex_text += en + "\tADJ\t100\n";
  fx.lexicon_path = dir / "lex.en.tsv";
  write_file(fx.lexicon_path, lex_text);

  // Terms drawn from three tiers of the dictionary so nested subsets
  // D1 = [0,7), D2 = [0,14), D3 = [0,20) each add test-visible terms.
  fx.test_terms = {fx.dict[0].first,  fx.dict[1].first,  fx.dict[2].first, fx.dict[7].first,
                   fx.dict[8].first,  fx.dict[9].first,  fx.dict[10].first,
                   fx.dict[14].first, fx.dict[15].first, fx.dict[17].first};
  std::string test_text;
  for (const auto& term : fx.test_terms) test_text += "the " + term + " persists today .\n";
  fx.test_path = dir / "test.en";
  write_file(fx.test_path, test_text);
  return fx;
}

} // namespace testutil
