#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dictaug/embedding.hpp"

namespace dictaug {

struct SearchHit {
  uint32_t sentence_id = 0;
  float score = 0.0f; // inner product == cosine (stored vectors are unit)
};

// Hits ordered by non-increasing score, ties by ascending sentence id.
bool hit_order(const SearchHit& a, const SearchHit& b);

struct BuildOptions {
  uint32_t clusters = 0; // 0: max(1, floor(sqrt(count)))
  uint64_t seed = 42;
  uint32_t max_iters = 15;
  size_t workers = 0; // 0: hardware concurrency (assignment step only)
};

// Inverted-file flat index: spherical k-means partition of unit vectors,
// queries probe the nprobe best-scoring cells. Deterministic for fixed
// (store, options): seeded k-means++ init, fixed iteration order, empty
// clusters reseeded from the globally farthest point.
class AnnIndex {
public:
  // Store keys must be decimal sentence ids. Hard error if clusters exceeds
  // the store size or a key is not an integer.
  static AnnIndex build(const EmbeddingStore& sentences, const BuildOptions& options = {});

  // Top-n by inner product over the nprobe posting lists whose centroids
  // score highest against the (internally normalized) query.
  // Hard error when nprobe is outside [1, clusters] or dimensions mismatch.
  std::vector<SearchHit> search(const Vec& query, size_t n, uint32_t nprobe) const;

  size_t dim() const { return dim_; }
  uint32_t clusters() const { return static_cast<uint32_t>(centroids_.size() / dim_); }
  size_t size() const { return total_; }

  // Posting-list ids per cluster, exposed for partition checks.
  const std::vector<std::vector<uint32_t>>& posting_ids() const { return ids_; }
  std::span<const float> centroid(uint32_t c) const { return {centroids_.data() + c * dim_, dim_}; }

  // Binary persistence: magic "DAIVF001", version, dim, clusters, count,
  // centroids, posting lists; little-endian throughout. Load rejects
  // version mismatches.
  void save(const std::filesystem::path& path) const;
  static AnnIndex load(const std::filesystem::path& path);

private:
  AnnIndex() = default;

  size_t dim_ = 0;
  size_t total_ = 0;
  std::vector<float> centroids_;               // clusters x dim
  std::vector<std::vector<uint32_t>> ids_;     // per-cluster sentence ids
  std::vector<std::vector<float>> vectors_;    // per-cluster vectors, contiguous
};

// Exact top-n by inner product over the whole store, same ordering rule.
// Oracle for recall measurement.
std::vector<SearchHit> exhaustive_search(const EmbeddingStore& store, const Vec& query, size_t n);

} // namespace dictaug
