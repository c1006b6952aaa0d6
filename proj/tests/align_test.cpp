#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "dictaug/align.hpp"
#include "dictaug/corpusio.hpp"
#include "dictaug/error.hpp"
#include "dictaug/util.hpp"
#include "testutil.hpp"

using namespace dictaug;
using testutil::TempDir;

namespace {

SentencePair make_pair(uint32_t id, const std::vector<std::string>& src,
                       const std::vector<std::string>& tgt) {
  SentencePair p;
  p.id = id;
  p.source = src;
  p.target = tgt;
  p.raw_source = join_tokens(src);
  p.raw_target = join_tokens(tgt);
  return p;
}

Bitext make_bitext(const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>&
                       pairs) {
  Bitext b;
  for (size_t i = 0; i < pairs.size(); ++i) {
    b.pairs.push_back(make_pair(static_cast<uint32_t>(i), pairs[i].first, pairs[i].second));
  }
  return b;
}

// Straight-line reference EM over string keys: same model (diagonal prior
// normalized over source positions, null word, uniform first iteration,
// 1e-9 floor), none of the library's interning, chunking or pruning.
struct RefModel {
  std::map<std::pair<std::string, std::string>, double> t;
  std::vector<double> loglik;
};

RefModel reference_em(const Bitext& bitext, uint32_t iterations, double lambda, double p0) {
  std::set<std::string> target_vocab;
  for (const auto& pair : bitext.pairs) {
    for (const auto& w : pair.target) target_vocab.insert(w);
  }
  const double uniform = 1.0 / static_cast<double>(target_vocab.size());

  RefModel ref;
  const auto prob = [&](const std::string& s, const std::string& w, bool first) {
    if (first) return uniform;
    const auto it = ref.t.find({s, w});
    return it == ref.t.end() ? 1e-9 : it->second;
  };

  for (uint32_t iter = 0; iter < iterations; ++iter) {
    const bool first = iter == 0;
    std::map<std::pair<std::string, std::string>, double> counts;
    double ll = 0.0;
    for (const auto& pair : bitext.pairs) {
      const size_t m = pair.source.size(), n = pair.target.size();
      for (size_t j = 1; j <= n; ++j) {
        std::vector<double> b(m);
        double z = 0.0;
        for (size_t i = 1; i <= m; ++i) {
          b[i - 1] = std::exp(-lambda * std::abs(static_cast<double>(i) / m -
                                                 static_cast<double>(j) / n));
          z += b[i - 1];
        }
        const std::string& w = pair.target[j - 1];
        double denom = p0 * prob("<null>", w, first);
        std::vector<double> post(m + 1);
        post[0] = denom;
        for (size_t i = 1; i <= m; ++i) {
          post[i] = (1.0 - p0) * (b[i - 1] / z) * prob(pair.source[i - 1], w, first);
          denom += post[i];
        }
        ll += std::log(denom);
        counts[{"<null>", w}] += post[0] / denom;
        for (size_t i = 1; i <= m; ++i) counts[{pair.source[i - 1], w}] += post[i] / denom;
      }
    }
    ref.loglik.push_back(ll);
    std::map<std::string, double> totals;
    for (const auto& [key, c] : counts) totals[key.first] += c;
    ref.t.clear();
    for (const auto& [key, c] : counts) ref.t[key] = c / totals[key.first];
  }
  return ref;
}

} // namespace

TEST_SUITE("align") {

TEST_CASE("em matches an independent reference implementation") {
  const Bitext bitext = make_bitext({{{"la", "maison"}, {"the", "house"}},
                                     {{"la", "fleur"}, {"the", "flower"}},
                                     {{"la", "maison", "bleue"}, {"the", "blue", "house"}},
                                     {{"une", "fleur"}, {"a", "flower"}}});
  TrainOptions opts;
  opts.workers = 1;
  const AlignmentModel model = train_alignment(bitext, opts);
  const RefModel ref = reference_em(bitext, opts.iterations, opts.lambda_init, opts.p_null);

  REQUIRE(model.iteration_loglik().size() == ref.loglik.size());
  for (size_t i = 0; i < ref.loglik.size(); ++i) {
    CHECK(model.iteration_loglik()[i] == doctest::Approx(ref.loglik[i]).epsilon(1e-9));
  }
  for (const auto& [key, p] : ref.t) {
    const uint32_t sid = key.first == "<null>" ? AlignmentModel::kNullId
                                               : model.source_id(key.first);
    const uint32_t tid = model.target_id(key.second);
    REQUIRE(sid != AlignmentModel::kUnknownId);
    REQUIRE(tid != AlignmentModel::kUnknownId);
    CHECK(model.prob(sid, tid) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("the classic two-pair corpus learns the expected preferences") {
  const Bitext bitext = make_bitext(
      {{{"la", "maison"}, {"the", "house"}}, {{"la", "fleur"}, {"the", "flower"}}});
  const AlignmentModel model = train_alignment(bitext);

  const uint32_t la = model.source_id("la");
  const uint32_t maison = model.source_id("maison");
  const uint32_t the = model.target_id("the");
  const uint32_t house = model.target_id("house");
  CHECK(model.prob(la, the) > model.prob(la, house));
  CHECK(model.prob(maison, house) > model.prob(maison, the));

  const auto links = viterbi_align(model, make_pair(0, {"la", "maison"}, {"the", "house"}));
  CHECK(links == AlignmentLinks{{0, 0}, {1, 1}});
}

TEST_CASE("single-pair corpus forces probability one") {
  const Bitext bitext = make_bitext({{{"a"}, {"b"}}});
  const AlignmentModel model = train_alignment(bitext);
  CHECK(model.prob(model.source_id("a"), model.target_id("b")) == doctest::Approx(1.0));
}

TEST_CASE("log-likelihood is non-decreasing and rows stay normalized") {
  const Bitext bitext = testutil::make_monotone_bitext(80, 12, 19);
  TrainOptions opts;
  opts.iterations = 6;
  const AlignmentModel model = train_alignment(bitext, opts);

  const auto& ll = model.iteration_loglik();
  REQUIRE(ll.size() == 6);
  for (size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1] - 1e-9);

  for (uint32_t sid = 0; sid < model.source_vocab_size(); ++sid) {
    const auto& row = model.row(sid);
    if (row.empty()) continue;
    double sum = 0.0;
    for (const auto& [tid, p] : row) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("viterbi recovers most gold links on a monotone lexicon corpus") {
  const Bitext bitext = testutil::make_monotone_bitext(300, 30, 21);
  const AlignmentModel model = train_alignment(bitext);
  size_t gold = 0, hit = 0;
  for (const auto& pair : bitext.pairs) {
    const auto links = viterbi_align(model, pair);
    std::set<std::pair<uint32_t, uint32_t>> have;
    for (const auto& l : links) have.insert({l.src, l.tgt});
    for (uint32_t j = 0; j < pair.target.size(); ++j) {
      ++gold;
      hit += have.count({j, j});
    }
  }
  CHECK(static_cast<double>(hit) / static_cast<double>(gold) >= 0.90);
}

TEST_CASE("identity-parallel training yields identity alignment") {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> raw;
  DetRng rng(27);
  for (int p = 0; p < 40; ++p) {
    std::vector<std::string> sent;
    const size_t len = 3 + rng.next_below(4);
    for (size_t i = 0; i < len; ++i) sent.push_back("w" + std::to_string(rng.next_below(10)));
    raw.push_back({sent, sent});
  }
  const Bitext bitext = make_bitext(raw);
  const AlignmentModel model = train_alignment(bitext);
  const auto& probe = bitext.pairs.front();
  const auto links = viterbi_align(model, probe);
  REQUIRE(links.size() == probe.target.size());
  for (uint32_t j = 0; j < links.size(); ++j) {
    CHECK(links[j].src == j);
    CHECK(links[j].tgt == j);
  }
}

TEST_CASE("viterbi tie goes to the smallest source position") {
  // Shape m=4, n=2: positions 1 and 3 sit at the exact same diagonal
  // distance from target position 1, so equal translation probabilities tie.
  const Bitext bitext = make_bitext({{{"a"}, {"d"}}});
  const AlignmentModel model = train_alignment(bitext);
  const auto links = viterbi_align(model, make_pair(0, {"a", "b", "a", "c"}, {"d", "d"}));
  REQUIRE(!links.empty());
  CHECK(links.front() == AlignLink{0, 0});
}

TEST_CASE("unseen target tokens fall to the null word on long sources") {
  const Bitext bitext = make_bitext({{{"a"}, {"b"}}});
  const AlignmentModel model = train_alignment(bitext);
  std::vector<std::string> long_src(60, "a");
  const auto links = viterbi_align(model, make_pair(0, long_src, {"zzz"}));
  CHECK(links.empty()); // null links carry no entry
}

TEST_CASE("project_span covers and rejects per the consistency rule") {
  // Direct examples.
  CHECK(project_span({{0, 0}, {1, 1}}, 1, 2, 2) == std::make_pair(1u, 2u));
  CHECK(project_span({{2, 0}, {2, 1}}, 2, 3, 2) == std::make_pair(0u, 2u));
  // Nothing links into the span.
  CHECK(!project_span({{0, 0}}, 1, 2, 2).has_value());
  CHECK(!project_span({}, 0, 1, 3).has_value());
  // Cover [0,3) contains target 1, which links to source 5 outside [1,2).
  CHECK(!project_span({{1, 0}, {5, 1}, {1, 2}}, 1, 2, 3).has_value());
  // The same span without the interloper is fine.
  CHECK(project_span({{1, 0}, {1, 2}}, 1, 2, 3) == std::make_pair(0u, 3u));
  // Out-of-bounds target positions invalidate the cover.
  CHECK(!project_span({{1, 7}}, 1, 2, 3).has_value());

  DetRng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    AlignmentLinks links;
    const uint32_t m = 1 + static_cast<uint32_t>(rng.next_below(8));
    const uint32_t n = 1 + static_cast<uint32_t>(rng.next_below(8));
    for (uint32_t j = 0; j < n; ++j) {
      if (rng.next_below(4) == 0) continue; // null
      links.push_back({static_cast<uint32_t>(rng.next_below(m)), j});
    }
    const uint32_t s = static_cast<uint32_t>(rng.next_below(m));
    const uint32_t e = s + 1 + static_cast<uint32_t>(rng.next_below(m - s));
    const auto span = project_span(links, s, e, n);
    if (span) {
      CHECK(span->first < span->second);
      CHECK(span->second <= n);
    }
  }
}

TEST_CASE("training validates its options") {
  const Bitext bitext = make_bitext({{{"a"}, {"b"}}});
  CHECK_THROWS_AS(train_alignment(Bitext{}), Error);
  TrainOptions bad;
  bad.iterations = 0;
  CHECK_THROWS_AS(train_alignment(bitext, bad), Error);
  bad = {};
  bad.p_null = 1.5;
  CHECK_THROWS_AS(train_alignment(bitext, bad), Error);
  bad = {};
  bad.lambda_init = 0.0;
  CHECK_THROWS_AS(train_alignment(bitext, bad), Error);
}

TEST_CASE("model persistence round-trips and rejects foreign files") {
  TempDir dir;
  const Bitext bitext = testutil::make_monotone_bitext(50, 10, 35);
  const AlignmentModel model = train_alignment(bitext);
  model.save(dir.file("m.bin"));
  const AlignmentModel loaded = AlignmentModel::load(dir.file("m.bin"));

  CHECK(loaded.lambda() == model.lambda());
  CHECK(loaded.p_null() == model.p_null());
  CHECK(loaded.iteration_loglik() == model.iteration_loglik());
  CHECK(loaded.source_vocab_size() == model.source_vocab_size());
  for (uint32_t sid = 0; sid < model.source_vocab_size(); ++sid) {
    CHECK(loaded.row(sid) == model.row(sid));
  }
  const auto& pair = bitext.pairs.front();
  CHECK(viterbi_align(loaded, pair) == viterbi_align(model, pair));

  testutil::write_file(dir.file("junk.bin"), "NOTAMODELFILE000000000");
  CHECK_THROWS_AS(AlignmentModel::load(dir.file("junk.bin")), Error);
}

TEST_CASE("pharaoh export writes i-j lines") {
  TempDir dir;
  write_pharaoh(dir.file("a.txt"), {{{0, 0}, {1, 1}}, {}, {{2, 0}}});
  CHECK(testutil::read_file(dir.file("a.txt")) == "0-0 1-1\n\n2-0\n");
}

} // TEST_SUITE
