#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "dictaug/corpusio.hpp"
#include "dictaug/error.hpp"
#include "dictaug/util.hpp"
#include "testutil.hpp"

using namespace dictaug;
using testutil::TempDir;
using testutil::write_file;

TEST_SUITE("corpusio") {

TEST_CASE("normalize maps unicode punctuation to ascii") {
  CHECK(normalize("“Hello”—world") == "\"Hello\" - world");
  CHECK(normalize("a  b") == "a b");
  CHECK(normalize("") == "");
  CHECK(normalize("  padded\t ") == "padded");
  CHECK(normalize("non breaking") == "non breaking");
  CHECK(normalize("l’eau") == "l'eau");
  CHECK(normalize("wait…") == "wait...");
}

TEST_CASE("normalize is idempotent") {
  const std::vector<std::string> fragments = {
      "word", "“q”", "—", "  ", "\t", "l’eau", "...", "« fr »",
      "60 %", "(x)", "don’t", "ligne–break", "été"};
  DetRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const size_t parts = 1 + rng.next_below(8);
    for (size_t i = 0; i < parts; ++i) s += fragments[rng.next_below(fragments.size())];
    const std::string once = normalize(s);
    CHECK(normalize(once) == once);
  }
}

TEST_CASE("tokenize detaches clause punctuation") {
  CHECK(tokenize(normalize("Dry mouth.")) == std::vector<std::string>{"Dry", "mouth", "."});
  CHECK(tokenize(normalize("(ST segment)")) == std::vector<std::string>{"(", "ST", "segment", ")"});
  CHECK(tokenize(normalize("l'énalaprilate ne dépasse pas 60 %")) ==
        std::vector<std::string>{"l'", "énalaprilate", "ne", "dépasse", "pas", "60", "%"});
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("x-ray scan") == std::vector<std::string>{"x-ray", "scan"});
  CHECK(tokenize("a, b; c: d") == std::vector<std::string>{"a", ",", "b", ";", "c", ":", "d"});
  CHECK(tokenize("") == std::vector<std::string>{});
}

TEST_CASE("tokenize fixed point and no empty tokens") {
  const std::vector<std::string> lines = {
      "Dry mouth.",  "l'insuffisance rénale (grave) !", "60 % des cas, dit-il.",
      "\"quoted\" text?", "x-ray; CT-scan: done."};
  for (const auto& line : lines) {
    const auto tokens = tokenize(normalize(line));
    for (const auto& t : tokens) CHECK(!t.empty());
    CHECK(tokenize(join_tokens(tokens)) == tokens);
  }
}

TEST_CASE("load_bitext aligns lines and drops empty pairs") {
  TempDir dir;
  write_file(dir.file("a.src"), "one two\n\nthree\n");
  write_file(dir.file("a.tgt"), "un deux\nvide\ntrois\n");
  const Bitext bitext = load_bitext(dir.file("a.src"), dir.file("a.tgt"), "en", "fr");
  REQUIRE(bitext.pairs.size() == 2);
  CHECK(bitext.dropped_empty == 1);
  CHECK(bitext.source_lang == "en");
  CHECK(bitext.pairs[0].source == std::vector<std::string>{"one", "two"});
  CHECK(bitext.pairs[1].target == std::vector<std::string>{"trois"});
  CHECK(bitext.pairs[0].id == 0);
  CHECK(bitext.pairs[1].id == 1);
}

TEST_CASE("load_bitext rejects mismatched line counts") {
  TempDir dir;
  write_file(dir.file("a.src"), "one\ntwo\n");
  write_file(dir.file("a.tgt"), "un\n");
  CHECK_THROWS_AS(load_bitext(dir.file("a.src"), dir.file("a.tgt")), Error);
}

TEST_CASE("load_bitext rejects invalid utf-8") {
  TempDir dir;
  write_file(dir.file("a.src"), std::string("bad\xff byte\n"));
  write_file(dir.file("a.tgt"), "ok\n");
  CHECK_THROWS_AS(load_bitext(dir.file("a.src"), dir.file("a.tgt")), Error);
}

TEST_CASE("load_dictionary parses rows and collapses duplicates") {
  TempDir dir;
  write_file(dir.file("d.tsv"),
             "myocardial infarction\tinfarctus du myocarde\n"
             "dry mouth\tbouche sèche\n"
             "myocardial infarction\tinfarctus du myocarde\n"
             "bad row without tab\n"
             "three\tcolumns\there\n");
  const DomainDictionary dict = load_dictionary(dir.file("d.tsv"));
  CHECK(dict.entries.size() == 2);
  CHECK(dict.duplicate_rows == 1);
  CHECK(dict.skipped_rows == 2);
  CHECK(dict.name == "d");
  CHECK(dict.entries[0].src == std::vector<std::string>{"myocardial", "infarction"});
  CHECK(dict.entries[0].tgt == std::vector<std::string>{"infarctus", "du", "myocarde"});
}

TEST_CASE("load_dictionary rejects an empty result") {
  TempDir dir;
  write_file(dir.file("d.tsv"), "only one column\n");
  CHECK_THROWS_AS(load_dictionary(dir.file("d.tsv")), Error);
}

TEST_CASE("deduplicate keeps first occurrences") {
  Bitext bitext;
  auto add = [&](const std::string& s, const std::string& t) {
    SentencePair p;
    p.id = static_cast<uint32_t>(bitext.pairs.size());
    p.raw_source = s;
    p.raw_target = t;
    p.source = tokenize(s);
    p.target = tokenize(t);
    bitext.pairs.push_back(std::move(p));
  };
  add("a", "b");
  add("a", "b");
  add("c", "d");
  uint64_t removed = 0;
  const Bitext out = deduplicate(bitext, &removed);
  REQUIRE(out.pairs.size() == 2);
  CHECK(removed == 1);
  CHECK(out.pairs[0].raw_source == "a");
  CHECK(out.pairs[1].raw_source == "c");
  CHECK(out.pairs[0].id == 0);
  CHECK(out.pairs[1].id == 1);
}

TEST_CASE("deduplicate matches a hash-set oracle and is idempotent") {
  DetRng rng(17);
  Bitext bitext;
  for (int i = 0; i < 300; ++i) {
    SentencePair p;
    p.id = static_cast<uint32_t>(i);
    const uint64_t w = rng.next_below(60); // small space forces collisions
    p.raw_source = "src " + std::to_string(w);
    p.raw_target = "tgt " + std::to_string(w);
    p.source = tokenize(p.raw_source);
    p.target = tokenize(p.raw_target);
    bitext.pairs.push_back(std::move(p));
  }

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> oracle;
  for (const auto& p : bitext.pairs) {
    if (seen.insert({p.raw_source, p.raw_target}).second) {
      oracle.emplace_back(p.raw_source, p.raw_target);
    }
  }

  uint64_t removed = 0;
  const Bitext out = deduplicate(bitext, &removed);
  REQUIRE(out.pairs.size() == oracle.size());
  CHECK(removed == bitext.pairs.size() - oracle.size());
  for (size_t i = 0; i < oracle.size(); ++i) {
    CHECK(out.pairs[i].raw_source == oracle[i].first);
    CHECK(out.pairs[i].raw_target == oracle[i].second);
  }

  uint64_t removed_again = 0;
  const Bitext twice = deduplicate(out, &removed_again);
  CHECK(removed_again == 0);
  CHECK(twice.pairs.size() == out.pairs.size());
}

TEST_CASE("write_bitext tokenized mode round-trips") {
  TempDir dir;
  DetRng rng(29);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "60", "%", "l'eau"};
  Bitext bitext;
  bitext.source_lang = "en";
  bitext.target_lang = "fr";
  for (int i = 0; i < 100; ++i) {
    SentencePair p;
    p.id = static_cast<uint32_t>(i);
    const size_t len = 1 + rng.next_below(6);
    for (size_t j = 0; j < len; ++j) p.source.push_back(words[rng.next_below(words.size())]);
    for (size_t j = 0; j < len; ++j) p.target.push_back(words[rng.next_below(words.size())]);
    p.raw_source = join_tokens(p.source);
    p.raw_target = join_tokens(p.target);
    bitext.pairs.push_back(std::move(p));
  }
  write_bitext(bitext, dir.file("o.src"), dir.file("o.tgt"), WriteMode::Tokenized);
  const Bitext loaded = load_bitext(dir.file("o.src"), dir.file("o.tgt"), "en", "fr");
  REQUIRE(loaded.pairs.size() == bitext.pairs.size());
  for (size_t i = 0; i < loaded.pairs.size(); ++i) {
    CHECK(loaded.pairs[i].source == bitext.pairs[i].source);
    CHECK(loaded.pairs[i].target == bitext.pairs[i].target);
  }
}

TEST_CASE("write_bitext with zero pairs writes empty files") {
  TempDir dir;
  Bitext empty;
  write_bitext(empty, dir.file("e.src"), dir.file("e.tgt"));
  CHECK(testutil::read_file(dir.file("e.src")).empty());
  CHECK(testutil::read_file(dir.file("e.tgt")).empty());
}

TEST_CASE("read_lines handles crlf and missing trailing newline") {
  TempDir dir;
  write_file(dir.file("x.txt"), "one\r\ntwo\nthree");
  const auto lines = read_lines(dir.file("x.txt"));
  CHECK(lines == std::vector<std::string>{"one", "two", "three"});
  CHECK_THROWS_AS(read_lines(dir.file("nope.txt")), Error);
}

TEST_CASE("load_tokenized_lines preserves order and empty lines") {
  TempDir dir;
  write_file(dir.file("x.txt"), "Dry mouth.\n\nsecond line\n");
  const auto lines = load_tokenized_lines(dir.file("x.txt"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == std::vector<std::string>{"Dry", "mouth", "."});
  CHECK(lines[1].empty());
  CHECK(lines[2] == std::vector<std::string>{"second", "line"});
}

} // TEST_SUITE
