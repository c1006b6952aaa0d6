#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "dictaug/embedding.hpp"
#include "dictaug/error.hpp"
#include "dictaug/util.hpp"
#include "testutil.hpp"

using namespace dictaug;
using testutil::TempDir;
using testutil::write_file;

TEST_SUITE("embedding") {

TEST_CASE("normalize_vector scales to unit length") {
  const Vec v = normalize_vector({3.0f, 4.0f});
  CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-6));

  const Vec unit = normalize_vector({1.0f, 0.0f});
  const Vec again = normalize_vector(unit);
  CHECK(std::abs(again[0] - unit[0]) < 1e-9);

  CHECK_THROWS_AS(normalize_vector({0.0f, 0.0f}), Error);
}

TEST_CASE("cosine matches hand values and stays bounded") {
  CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cosine({2, 1}, {4, 2}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cosine({1, 1}, {1, 0}) == doctest::Approx(0.7071).epsilon(1e-4));
  CHECK(cosine({1, 0}, {-1, 0}) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK_THROWS_AS(cosine({1, 0}, {1, 0, 0}), Error);
  CHECK_THROWS_AS(cosine({0, 0}, {1, 0}), Error);

  DetRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Vec a(8), b(8);
    for (size_t i = 0; i < 8; ++i) {
      a[i] = static_cast<float>(rng.next_double() * 2.0 - 1.0);
      b[i] = static_cast<float>(rng.next_double() * 2.0 - 1.0);
    }
    const double ab = cosine(a, b);
    CHECK(std::abs(ab) <= 1.0 + 1e-9);
    CHECK(ab == doctest::Approx(cosine(b, a)).epsilon(1e-12));
    // Pre-normalized inner product equals cosine.
    const Vec na = normalize_vector(a), nb = normalize_vector(b);
    CHECK(static_cast<double>(dot(na, nb)) == doctest::Approx(cosine(na, nb)).epsilon(1e-6));
  }
}

TEST_CASE("fallback_embed is deterministic and unit-norm") {
  const Vec a = fallback_embed("abc", 16, 7);
  const Vec b = fallback_embed("abc", 16, 7);
  CHECK(a == b); // bitwise
  CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fallback_embed("abc", 16, 8) != fallback_embed("abc", 16, 7));
  CHECK_THROWS_AS(fallback_embed("", 16, 7), Error);
  CHECK_THROWS_AS(fallback_embed("abc", 4, 7), Error);
}

TEST_CASE("fallback_embed ranks near-edits above unrelated words") {
  DetRng rng(41);
  const auto random_word = [&](size_t len) {
    std::string w;
    for (size_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + rng.next_below(26)));
    return w;
  };
  double edit_sum = 0.0, unrelated_sum = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const std::string w = random_word(6 + rng.next_below(5));
    std::string edited = w;
    edited[rng.next_below(edited.size())] = static_cast<char>('a' + rng.next_below(26));
    const std::string other = random_word(6 + rng.next_below(5));
    const Vec ew = fallback_embed(w, 32, 3);
    edit_sum += cosine(ew, fallback_embed(edited, 32, 3));
    unrelated_sum += cosine(ew, fallback_embed(other, 32, 3));
  }
  CHECK(edit_sum / trials > unrelated_sum / trials);
}

TEST_CASE("store enforces dimension and key uniqueness") {
  EmbeddingStore store(4);
  store.add("a", {1, 0, 0, 0});
  store.add("b", {0, 2, 0, 0}); // normalized on insert
  CHECK(store.size() == 2);
  CHECK(store.row(1)[1] == doctest::Approx(1.0f));
  CHECK(store.find("a").value() == 0);
  CHECK(!store.find("missing").has_value());
  CHECK_THROWS_AS(store.add("a", {1, 0, 0, 0}), Error);
  CHECK_THROWS_AS(store.add("c", {1, 0, 0}), Error);
  CHECK_THROWS_AS(store.add("d", {0, 0, 0, 0}), Error);
}

TEST_CASE("tsv and binary formats round-trip") {
  TempDir dir;
  EmbeddingStore store(4);
  store.add("alpha", {0.25f, -1.5f, 3.0f, 0.125f});
  store.add("42", {1.0f, 1.0f, 1.0f, 1.0f});
  store.add("l'eau", {-2.0f, 0.5f, 0.0f, 1.0f});

  save_embeddings_tsv(store, dir.file("e.tsv"));
  const EmbeddingStore from_tsv = load_embeddings(dir.file("e.tsv"));
  REQUIRE(from_tsv.size() == 3);
  CHECK(from_tsv.dim() == 4);
  for (size_t i = 0; i < store.size(); ++i) {
    CHECK(from_tsv.key(i) == store.key(i));
    for (size_t d = 0; d < 4; ++d) {
      CHECK(from_tsv.row(i)[d] == doctest::Approx(store.row(i)[d]).epsilon(1e-6));
    }
  }

  save_embeddings_binary(store, dir.file("e.bin"));
  const EmbeddingStore from_bin = load_embeddings(dir.file("e.bin"));
  REQUIRE(from_bin.size() == 3);
  for (size_t i = 0; i < store.size(); ++i) {
    CHECK(from_bin.key(i) == store.key(i));
    for (size_t d = 0; d < 4; ++d) {
      CHECK(from_bin.row(i)[d] == store.row(i)[d]); // binary is exact
    }
  }
}

TEST_CASE("load_embeddings rejects dimension mismatches naming the key") {
  TempDir dir;
  write_file(dir.file("bad.tsv"), "a\t1 0 0 0\nbadkey\t1 0 0\n");
  try {
    load_embeddings(dir.file("bad.tsv"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("badkey") != std::string::npos);
  }
}

TEST_CASE("load_embeddings accepts a 768-dimension record") {
  TempDir dir;
  std::string line = "cls\t";
  for (int i = 0; i < 768; ++i) line += (i ? " 0.5" : "0.5");
  write_file(dir.file("wide.tsv"), line + "\n");
  const EmbeddingStore store = load_embeddings(dir.file("wide.tsv"));
  CHECK(store.dim() == 768);
  CHECK(store.size() == 1);
}

} // TEST_SUITE
