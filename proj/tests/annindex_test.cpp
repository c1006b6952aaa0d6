#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "dictaug/annindex.hpp"
#include "dictaug/embedding.hpp"
#include "dictaug/error.hpp"
#include "dictaug/util.hpp"
#include "testutil.hpp"

using namespace dictaug;
using testutil::TempDir;

namespace {

Vec random_unit(DetRng& rng, size_t dim) {
  Vec v(dim);
  for (auto& x : v) x = static_cast<float>(rng.next_double() * 2.0 - 1.0);
  return normalize_vector(std::move(v));
}

EmbeddingStore random_store(size_t count, size_t dim, uint64_t seed) {
  DetRng rng(seed);
  EmbeddingStore store(dim);
  for (size_t i = 0; i < count; ++i) {
    store.add(EmbeddingStore::sentence_key(static_cast<uint32_t>(i)), random_unit(rng, dim));
  }
  return store;
}

bool same_hits(const std::vector<SearchHit>& a, const std::vector<SearchHit>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].sentence_id != b[i].sentence_id || a[i].score != b[i].score) return false;
  }
  return true;
}

} // namespace

TEST_SUITE("annindex") {

TEST_CASE("two separated groups land in separate posting lists") {
  EmbeddingStore store(4);
  store.add("0", normalize_vector({1.0f, 0.05f, 0.0f, 0.0f}));
  store.add("1", normalize_vector({1.0f, -0.05f, 0.0f, 0.0f}));
  store.add("2", normalize_vector({0.0f, 0.05f, 1.0f, 0.0f}));
  store.add("3", normalize_vector({0.0f, -0.05f, 1.0f, 0.0f}));
  BuildOptions opts;
  opts.clusters = 2;
  const AnnIndex index = AnnIndex::build(store, opts);
  std::set<std::set<uint32_t>> lists;
  for (const auto& ids : index.posting_ids()) lists.insert({ids.begin(), ids.end()});
  CHECK(lists == std::set<std::set<uint32_t>>{{0, 1}, {2, 3}});
}

TEST_CASE("degenerate cluster counts") {
  const EmbeddingStore store = random_store(12, 8, 2);
  BuildOptions opts;
  opts.clusters = 1;
  const AnnIndex one = AnnIndex::build(store, opts);
  REQUIRE(one.clusters() == 1);
  CHECK(one.posting_ids()[0].size() == 12);

  opts.clusters = 12;
  const AnnIndex each = AnnIndex::build(store, opts);
  CHECK(each.clusters() == 12);
  for (const auto& ids : each.posting_ids()) CHECK(ids.size() == 1);

  opts.clusters = 13;
  CHECK_THROWS_AS(AnnIndex::build(store, opts), Error);
}

TEST_CASE("partition invariant holds on random stores") {
  const EmbeddingStore store = random_store(150, 8, 3);
  BuildOptions opts;
  opts.clusters = 9;
  const AnnIndex index = AnnIndex::build(store, opts);
  std::set<uint32_t> all;
  size_t total = 0;
  for (const auto& ids : index.posting_ids()) {
    for (uint32_t id : ids) all.insert(id);
    total += ids.size();
  }
  CHECK(total == 150);      // disjoint
  CHECK(all.size() == 150); // complete
  CHECK(*all.rbegin() == 149);
}

TEST_CASE("self-retrieval under full probe") {
  const EmbeddingStore store = random_store(60, 8, 4);
  BuildOptions opts;
  opts.clusters = 6;
  const AnnIndex index = AnnIndex::build(store, opts);
  const auto row = store.row(17);
  const auto hits = index.search(Vec(row.begin(), row.end()), 3, index.clusters());
  REQUIRE(!hits.empty());
  CHECK(hits[0].sentence_id == 17);
  CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exhaustive_search basics") {
  EmbeddingStore store(4);
  store.add("0", normalize_vector({1.0f, 0.1f, 0.0f, 0.0f}));  // high
  store.add("1", normalize_vector({0.3f, 1.0f, 0.0f, 0.0f}));  // mid
  store.add("2", normalize_vector({0.0f, 0.1f, 1.0f, 0.0f}));  // low
  const Vec q = normalize_vector({1.0f, 0.0f, 0.0f, 0.0f});
  const auto top2 = exhaustive_search(store, q, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].sentence_id == 0);
  CHECK(top2[1].sentence_id == 1);
  const auto all = exhaustive_search(store, q, 10);
  CHECK(all.size() == 3);
  CHECK(std::is_sorted(all.begin(), all.end(), hit_order));
}

TEST_CASE("full probe equals the exhaustive oracle") {
  DetRng rng(7);
  for (int instance = 0; instance < 10; ++instance) {
    const EmbeddingStore store = random_store(200, 8, 100 + instance);
    BuildOptions opts;
    opts.clusters = 14;
    const AnnIndex index = AnnIndex::build(store, opts);
    for (int q = 0; q < 5; ++q) {
      const Vec query = random_unit(rng, 8);
      CHECK(same_hits(index.search(query, 10, 14), exhaustive_search(store, query, 10)));
    }
  }
}

TEST_CASE("recall is non-decreasing in nprobe") {
  const EmbeddingStore store = random_store(2000, 16, 9);
  BuildOptions opts;
  opts.clusters = 40;
  const AnnIndex index = AnnIndex::build(store, opts);
  DetRng rng(10);
  std::vector<Vec> queries;
  for (int q = 0; q < 20; ++q) queries.push_back(random_unit(rng, 16));

  double prev = -1.0;
  for (uint32_t nprobe : {1u, 4u, 10u, 40u}) {
    size_t found = 0;
    for (const auto& query : queries) {
      const auto approx = index.search(query, 10, nprobe);
      const auto exact = exhaustive_search(store, query, 10);
      std::set<uint32_t> exact_ids;
      for (const auto& h : exact) exact_ids.insert(h.sentence_id);
      for (const auto& h : approx) found += exact_ids.count(h.sentence_id);
    }
    const double recall = static_cast<double>(found) / (10.0 * queries.size());
    CHECK(recall >= prev);
    prev = recall;
  }
  CHECK(prev == doctest::Approx(1.0)); // nprobe == clusters is exact
}

TEST_CASE("build is deterministic and persistence round-trips") {
  TempDir dir;
  const EmbeddingStore store = random_store(100, 8, 12);
  BuildOptions opts;
  opts.clusters = 7;
  AnnIndex::build(store, opts).save(dir.file("a.idx"));
  AnnIndex::build(store, opts).save(dir.file("b.idx"));
  CHECK(testutil::read_file(dir.file("a.idx")) == testutil::read_file(dir.file("b.idx")));

  const AnnIndex loaded = AnnIndex::load(dir.file("a.idx"));
  const AnnIndex fresh = AnnIndex::build(store, opts);
  DetRng rng(13);
  for (int q = 0; q < 10; ++q) {
    const Vec query = random_unit(rng, 8);
    CHECK(same_hits(loaded.search(query, 5, 3), fresh.search(query, 5, 3)));
  }
}

TEST_CASE("load rejects foreign and truncated files") {
  TempDir dir;
  testutil::write_file(dir.file("junk.idx"), "NOTANIDX0000000000");
  CHECK_THROWS_AS(AnnIndex::load(dir.file("junk.idx")), Error);

  const EmbeddingStore store = random_store(20, 8, 14);
  AnnIndex::build(store, {}).save(dir.file("ok.idx"));
  const std::string bytes = testutil::read_file(dir.file("ok.idx"));
  testutil::write_file(dir.file("cut.idx"), bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(AnnIndex::load(dir.file("cut.idx")), Error);
}

TEST_CASE("search validates nprobe and dimensions") {
  const EmbeddingStore store = random_store(30, 8, 15);
  BuildOptions opts;
  opts.clusters = 5;
  const AnnIndex index = AnnIndex::build(store, opts);
  const Vec q8 = Vec(8, 0.5f);
  CHECK_THROWS_AS(index.search(q8, 5, 0), Error);
  CHECK_THROWS_AS(index.search(q8, 5, 6), Error);
  CHECK_THROWS_AS(index.search(Vec(4, 0.5f), 5, 2), Error);
}

} // TEST_SUITE
