#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dictaug {

// Fixed-dimension real vector. Stores for similarity search hold these
// unit-normalized so inner product equals cosine.
using Vec = std::vector<float>;

// Shared dot-product kernel (double accumulation, fixed order). Both the ANN
// index and the exhaustive oracle score through this, so their results are
// bitwise comparable.
float dot(std::span<const float> a, std::span<const float> b);

// Cosine similarity in [-1, 1]. Hard error on dimension mismatch or a zero
// vector.
double cosine(const Vec& a, const Vec& b);

// v / ||v||2. Hard error on a zero vector. Idempotent within float rounding.
Vec normalize_vector(Vec v);

double l2_norm(std::span<const float> v);

// Deterministic stand-in embedder: the L2-normalized mean of seeded-hash unit
// vectors for the text's character 3-grams (with boundary sentinels). Equal
// (text, dim, seed) yields bitwise-equal vectors on any IEEE-754 platform;
// strings sharing 3-grams score higher than unrelated strings. dim >= 8;
// empty text is an error.
Vec fallback_embed(std::string_view text, size_t dim, uint64_t seed);

// Keyed collection of unit vectors sharing one dimension. Keys are term
// surface strings, or decimal line ids for sentence embeddings. Vectors are
// L2-normalized on insertion so downstream search can use pure inner product.
class EmbeddingStore {
public:
  explicit EmbeddingStore(size_t dim);

  size_t dim() const { return dim_; }
  size_t size() const { return keys_.size(); }

  // Normalizes and stores. Hard error on dimension mismatch, a zero vector,
  // or a duplicate key (errors name the key).
  void add(std::string key, Vec v);

  std::span<const float> row(size_t i) const;
  const std::string& key(size_t i) const { return keys_[i]; }
  std::optional<size_t> find(std::string_view key) const;

  static std::string sentence_key(uint32_t id) { return std::to_string(id); }

private:
  size_t dim_;
  std::vector<std::string> keys_;
  std::vector<float> data_;
  std::unordered_map<std::string, size_t> by_key_;
};

// Loads a store from either the TSV format (`key<TAB>f1 f2 ... fd`) or the
// binary format (sniffed by magic). Hard error on dimension mismatch between
// records, naming the offending key.
EmbeddingStore load_embeddings(const std::filesystem::path& path);

// Binary format: magic "DAEMB001", dim (u32 LE), count (u64 LE), then
// records of (u32-length-prefixed UTF-8 key, dim * f32 LE).
void save_embeddings_binary(const EmbeddingStore& store, const std::filesystem::path& path);
void save_embeddings_tsv(const EmbeddingStore& store, const std::filesystem::path& path);

} // namespace dictaug
