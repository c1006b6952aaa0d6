#include "dictaug/annindex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "dictaug/error.hpp"
#include "dictaug/util.hpp"

namespace dictaug {

namespace {

constexpr char kIvfMagic[8] = {'D', 'A', 'I', 'V', 'F', '0', '0', '1'};
constexpr uint32_t kIvfVersion = 1;

// Assignment kernel: float accumulation is enough for picking the best
// centroid and vectorizes better than the double-accumulating score kernel.
float dot_f(const float* a, const float* b, size_t d) {
  float acc = 0.0f;
  for (size_t i = 0; i < d; ++i) acc += a[i] * b[i];
  return acc;
}

uint32_t parse_sentence_id(const std::string& key) {
  uint32_t id = 0;
  const auto* begin = key.data();
  const auto* end = begin + key.size();
  auto [ptr, ec] = std::from_chars(begin, end, id);
  if (ec != std::errc() || ptr != end) {
    throw Error("AnnIndex: store key '" + key + "' is not a sentence id");
  }
  return id;
}

// Best centroid by inner product, ties to the smallest index.
uint32_t assign_one(const float* x, const std::vector<float>& centroids, size_t d) {
  const size_t k = centroids.size() / d;
  uint32_t best = 0;
  float best_score = -std::numeric_limits<float>::infinity();
  for (size_t c = 0; c < k; ++c) {
    const float s = dot_f(x, centroids.data() + c * d, d);
    if (s > best_score) {
      best_score = s;
      best = static_cast<uint32_t>(c);
    }
  }
  return best;
}

Vec prepare_query(const Vec& query, size_t dim) {
  if (query.size() != dim) {
    throw Error("query dimension mismatch: expected " + std::to_string(dim) + ", got " +
                std::to_string(query.size()));
  }
  return normalize_vector(query);
}

void top_n_inplace(std::vector<SearchHit>& hits, size_t n) {
  if (hits.size() > n) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(n), hits.end(), hit_order);
    hits.resize(n);
  } else {
    std::sort(hits.begin(), hits.end(), hit_order);
  }
}

} // namespace

bool hit_order(const SearchHit& a, const SearchHit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.sentence_id < b.sentence_id;
}

AnnIndex AnnIndex::build(const EmbeddingStore& sentences, const BuildOptions& options) {
  const size_t n = sentences.size();
  const size_t d = sentences.dim();
  if (n == 0) throw Error("AnnIndex: cannot build from an empty store");

  uint32_t k = options.clusters;
  if (k == 0) k = std::max<uint32_t>(1, static_cast<uint32_t>(std::floor(std::sqrt(static_cast<double>(n)))));
  if (k > n) {
    throw Error("AnnIndex: cluster count " + std::to_string(k) + " exceeds vector count " +
                std::to_string(n));
  }

  std::vector<uint32_t> ids(n);
  for (size_t i = 0; i < n; ++i) ids[i] = parse_sentence_id(sentences.key(i));

  // k-means++ seeding on the squared chord distance 2(1 - cos).
  DetRng rng(options.seed);
  std::vector<float> centroids;
  centroids.reserve(static_cast<size_t>(k) * d);
  {
    const size_t first = static_cast<size_t>(rng.next_below(n));
    auto r = sentences.row(first);
    centroids.insert(centroids.end(), r.begin(), r.end());

    std::vector<double> weight(n);
    for (size_t i = 0; i < n; ++i) {
      const float s = dot_f(sentences.row(i).data(), centroids.data(), d);
      weight[i] = std::max(0.0, 2.0 * (1.0 - static_cast<double>(s)));
    }
    for (uint32_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (double w : weight) total += w;
      size_t pick = 0;
      if (total <= 0.0) {
        pick = static_cast<size_t>(rng.next_below(n));
      } else {
        const double target = rng.next_double() * total;
        double cum = 0.0;
        pick = n - 1;
        for (size_t i = 0; i < n; ++i) {
          cum += weight[i];
          if (cum >= target) {
            pick = i;
            break;
          }
        }
      }
      auto r = sentences.row(pick);
      centroids.insert(centroids.end(), r.begin(), r.end());
      const float* cptr = centroids.data() + static_cast<size_t>(c) * d;
      for (size_t i = 0; i < n; ++i) {
        const float s = dot_f(sentences.row(i).data(), cptr, d);
        weight[i] = std::min(weight[i], std::max(0.0, 2.0 * (1.0 - static_cast<double>(s))));
      }
    }
  }

  auto assign_all = [&](std::vector<uint32_t>& out) {
    parallel_chunks(n, options.workers, [&](size_t, size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        out[i] = assign_one(sentences.row(i).data(), centroids, d);
      }
    });
  };

  std::vector<uint32_t> assign(n);
  std::vector<uint32_t> next(n);
  assign_all(assign);

  std::vector<double> sums(static_cast<size_t>(k) * d);
  std::vector<uint64_t> counts(k);
  for (uint32_t iter = 0; iter < options.max_iters; ++iter) {
    // M-step: spherical centroid update.
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      const uint32_t c = assign[i];
      auto r = sentences.row(i);
      double* s = sums.data() + static_cast<size_t>(c) * d;
      for (size_t j = 0; j < d; ++j) s[j] += r[j];
      ++counts[c];
    }
    for (uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double* s = sums.data() + static_cast<size_t>(c) * d;
      double norm_sq = 0.0;
      for (size_t j = 0; j < d; ++j) norm_sq += s[j] * s[j];
      float* out = centroids.data() + static_cast<size_t>(c) * d;
      if (norm_sq == 0.0) {
        continue; // mean cancelled exactly; keep previous centroid
      }
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (size_t j = 0; j < d; ++j) out[j] = static_cast<float>(s[j] * inv);
    }
    // Reseed empty clusters from the farthest point (lowest score against
    // its centroid); each reseed consumes its point.
    std::vector<bool> taken(n, false);
    for (uint32_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far_i = n;
      float far_score = std::numeric_limits<float>::infinity();
      for (size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const float s =
            dot_f(sentences.row(i).data(), centroids.data() + static_cast<size_t>(assign[i]) * d, d);
        if (s < far_score) {
          far_score = s;
          far_i = i;
        }
      }
      if (far_i == n) break;
      taken[far_i] = true;
      auto r = sentences.row(far_i);
      std::copy(r.begin(), r.end(), centroids.begin() + static_cast<size_t>(c) * d);
    }

    assign_all(next);
    if (next == assign) break;
    assign.swap(next);
  }

  AnnIndex index;
  index.dim_ = d;
  index.total_ = n;
  index.centroids_ = std::move(centroids);
  index.ids_.resize(k);
  index.vectors_.resize(k);
  for (size_t i = 0; i < n; ++i) {
    const uint32_t c = assign[i];
    index.ids_[c].push_back(ids[i]);
    auto r = sentences.row(i);
    index.vectors_[c].insert(index.vectors_[c].end(), r.begin(), r.end());
  }
  return index;
}

std::vector<SearchHit> AnnIndex::search(const Vec& query, size_t n, uint32_t nprobe) const {
  const uint32_t k = clusters();
  if (nprobe < 1 || nprobe > k) {
    throw Error("nprobe " + std::to_string(nprobe) + " out of range [1, " + std::to_string(k) +
                "]");
  }
  const Vec q = prepare_query(query, dim_);

  std::vector<SearchHit> cells(k);
  for (uint32_t c = 0; c < k; ++c) {
    cells[c].sentence_id = c;
    cells[c].score = dot(centroid(c), q);
  }
  top_n_inplace(cells, nprobe);

  std::vector<SearchHit> hits;
  for (const auto& cell : cells) {
    const auto& ids = ids_[cell.sentence_id];
    const auto& vecs = vectors_[cell.sentence_id];
    for (size_t i = 0; i < ids.size(); ++i) {
      const float s = dot({vecs.data() + i * dim_, dim_}, q);
      hits.push_back({ids[i], s});
    }
  }
  top_n_inplace(hits, n);
  return hits;
}

std::vector<SearchHit> exhaustive_search(const EmbeddingStore& store, const Vec& query, size_t n) {
  const Vec q = prepare_query(query, store.dim());
  std::vector<SearchHit> hits;
  hits.reserve(store.size());
  for (size_t i = 0; i < store.size(); ++i) {
    uint32_t id = 0;
    const auto& key = store.key(i);
    const auto* begin = key.data();
    auto [ptr, ec] = std::from_chars(begin, begin + key.size(), id);
    if (ec != std::errc() || ptr != begin + key.size()) {
      throw Error("exhaustive_search: store key '" + key + "' is not a sentence id");
    }
    hits.push_back({id, dot(store.row(i), q)});
  }
  top_n_inplace(hits, n);
  return hits;
}

void AnnIndex::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  out.write(kIvfMagic, 8);
  write_le<uint32_t>(out, kIvfVersion);
  write_le<uint32_t>(out, static_cast<uint32_t>(dim_));
  write_le<uint32_t>(out, clusters());
  write_le<uint64_t>(out, total_);
  for (float x : centroids_) write_le<float>(out, x);
  for (uint32_t c = 0; c < clusters(); ++c) {
    write_le<uint64_t>(out, ids_[c].size());
    for (uint32_t id : ids_[c]) write_le<uint32_t>(out, id);
    for (float x : vectors_[c]) write_le<float>(out, x);
  }
  if (!out) throw Error("write failed: " + path.string());
}

AnnIndex AnnIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index file: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kIvfMagic, 8) != 0) {
    throw Error("not an index file (bad magic): " + path.string());
  }
  const uint32_t version = read_le<uint32_t>(in);
  if (version != kIvfVersion) {
    throw Error("unsupported index version " + std::to_string(version) + " in " + path.string() +
                " (expected " + std::to_string(kIvfVersion) + ")");
  }
  AnnIndex index;
  index.dim_ = read_le<uint32_t>(in);
  const uint32_t k = read_le<uint32_t>(in);
  index.total_ = read_le<uint64_t>(in);
  if (index.dim_ == 0 || k == 0) throw Error("corrupt index header: " + path.string());
  index.centroids_.resize(static_cast<size_t>(k) * index.dim_);
  for (auto& x : index.centroids_) x = read_le<float>(in);
  index.ids_.resize(k);
  index.vectors_.resize(k);
  for (uint32_t c = 0; c < k; ++c) {
    const uint64_t sz = read_le<uint64_t>(in);
    index.ids_[c].resize(sz);
    for (auto& id : index.ids_[c]) id = read_le<uint32_t>(in);
    index.vectors_[c].resize(sz * index.dim_);
    for (auto& x : index.vectors_[c]) x = read_le<float>(in);
  }
  return index;
}

} // namespace dictaug
