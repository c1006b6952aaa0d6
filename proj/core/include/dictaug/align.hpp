#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dictaug/corpusio.hpp"

namespace dictaug {

struct AlignLink {
  uint32_t src = 0;
  uint32_t tgt = 0;
  friend bool operator==(const AlignLink&, const AlignLink&) = default;
};

// One link per target token; null-aligned target positions carry no link.
using AlignmentLinks = std::vector<AlignLink>;

struct TrainOptions {
  uint32_t iterations = 5;
  double lambda_init = 4.0;
  double p_null = 0.08;
  bool optimize_lambda = false;
  double prune_threshold = 1e-9;
  size_t workers = 0;
};

// Reparameterized IBM Model 2 (fast_align-style): p(T|S) factors over target
// positions, each generated from a source token or the null word, with a
// diagonal prior exp(-lambda*|i/m - j/n|) over source positions.
class AlignmentModel {
public:
  static constexpr double kFloor = 1e-9;
  static constexpr uint32_t kNullId = 0;
  static constexpr uint32_t kUnknownId = UINT32_MAX;

  // Lookup ids; kUnknownId for out-of-vocabulary tokens.
  uint32_t source_id(std::string_view token) const;
  uint32_t target_id(std::string_view token) const;

  size_t source_vocab_size() const { return source_words_.size(); }
  size_t target_vocab_size() const { return target_words_.size(); }

  // t(target | source), floored at kFloor for unknown ids and unseen pairs.
  double prob(uint32_t src_id, uint32_t tgt_id) const;

  double lambda() const { return lambda_; }
  double p_null() const { return p_null_; }
  const std::vector<double>& iteration_loglik() const { return iteration_loglik_; }

  // Probability rows, sorted by target id (per-source sums are 1 +- 1e-6).
  using Row = std::vector<std::pair<uint32_t, double>>;
  const Row& row(uint32_t src_id) const { return t_.at(src_id); }

  void save(const std::filesystem::path& path) const;
  static AlignmentModel load(const std::filesystem::path& path);

private:
  friend AlignmentModel train_alignment(const Bitext&, const TrainOptions&);

  double lambda_ = 4.0;
  double p_null_ = 0.08;
  std::vector<std::string> source_words_; // [0] is the null word
  std::vector<std::string> target_words_;
  std::unordered_map<std::string, uint32_t> source_ids_;
  std::unordered_map<std::string, uint32_t> target_ids_;
  std::vector<Row> t_; // indexed by source id
  std::vector<double> iteration_loglik_;
};

// EM training, source -> target direction. Deterministic given input order.
AlignmentModel train_alignment(const Bitext& bitext, const TrainOptions& options = {});

// Per target position, argmax over source positions and null of
// t(target_j | source_i) * delta(i, j, m, n); ties to the smallest i with
// null counting as position zero.
AlignmentLinks viterbi_align(const AlignmentModel& model, const SentencePair& pair);

// Minimal contiguous target cover of the positions linked into
// [src_start, src_end); none when nothing links in or the cover contains a
// position linked outside the span.
std::optional<std::pair<uint32_t, uint32_t>> project_span(const AlignmentLinks& links,
                                                          uint32_t src_start, uint32_t src_end,
                                                          uint32_t target_len);

// Conventional `i-j` alignment text, one sentence per line.
void write_pharaoh(const std::filesystem::path& path,
                   const std::vector<AlignmentLinks>& alignments);

} // namespace dictaug
