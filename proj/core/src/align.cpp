#include "dictaug/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dictaug/error.hpp"
#include "dictaug/util.hpp"

namespace dictaug {

namespace {

constexpr char kModelMagic[8] = {'D', 'A', 'A', 'L', 'N', '0', '0', '1'};
constexpr uint32_t kModelVersion = 1;
constexpr const char* kNullWord = "<null>";

// Normalized diagonal prior rows for one (m, n) shape: row j (0-based target
// position) holds exp(-lambda*|i/m - j/n|) / Z over 1-based source positions.
// Shapes repeat heavily across a corpus, so rows are memoized per worker.
class DeltaCache {
public:
  explicit DeltaCache(double lambda) : lambda_(lambda) {}

  const double* rows(uint32_t m, uint32_t n) {
    const uint64_t key = (static_cast<uint64_t>(m) << 32) | n;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second.data();
    std::vector<double> rows(static_cast<size_t>(m) * n);
    for (uint32_t j = 0; j < n; ++j) {
      double* row = rows.data() + static_cast<size_t>(j) * m;
      const double jr = static_cast<double>(j + 1) / n;
      double z = 0.0;
      for (uint32_t i = 0; i < m; ++i) {
        const double ir = static_cast<double>(i + 1) / m;
        row[i] = std::exp(-lambda_ * std::abs(ir - jr));
        z += row[i];
      }
      for (uint32_t i = 0; i < m; ++i) row[i] /= z;
    }
    return cache_.emplace(key, std::move(rows)).first->second.data();
  }

private:
  double lambda_;
  std::unordered_map<uint64_t, std::vector<double>> cache_;
};

using CountTable = std::vector<std::unordered_map<uint32_t, double>>;

struct EStepAccum {
  CountTable counts;
  double loglik = 0.0;
  double posterior_h = 0.0; // expected |i/m - j/n| under the posterior
  double prior_h = 0.0;     // same expectation under the prior
  double tokens = 0.0;
};

uint32_t intern(std::vector<std::string>& words, std::unordered_map<std::string, uint32_t>& ids,
                const std::string& token) {
  const auto [it, inserted] = ids.emplace(token, static_cast<uint32_t>(words.size()));
  if (inserted) words.push_back(token);
  return it->second;
}

} // namespace

uint32_t AlignmentModel::source_id(std::string_view token) const {
  const auto it = source_ids_.find(std::string(token));
  return it == source_ids_.end() ? kUnknownId : it->second;
}

uint32_t AlignmentModel::target_id(std::string_view token) const {
  const auto it = target_ids_.find(std::string(token));
  return it == target_ids_.end() ? kUnknownId : it->second;
}

double AlignmentModel::prob(uint32_t src_id, uint32_t tgt_id) const {
  if (src_id >= t_.size() || tgt_id == kUnknownId) return kFloor;
  const Row& row = t_[src_id];
  const auto it = std::lower_bound(row.begin(), row.end(), tgt_id,
                                   [](const auto& e, uint32_t id) { return e.first < id; });
  if (it == row.end() || it->first != tgt_id) return kFloor;
  return it->second;
}

AlignmentModel train_alignment(const Bitext& bitext, const TrainOptions& options) {
  if (bitext.pairs.empty()) throw Error("train_alignment: empty bitext");
  if (options.iterations < 1) throw Error("train_alignment: iterations must be >= 1");
  if (options.p_null <= 0.0 || options.p_null >= 1.0) {
    throw Error("train_alignment: p_null must be in (0, 1)");
  }
  if (options.lambda_init <= 0.0) throw Error("train_alignment: lambda_init must be positive");

  AlignmentModel model;
  model.lambda_ = options.lambda_init;
  model.p_null_ = options.p_null;
  model.source_words_ = {kNullWord};
  model.source_ids_ = {{kNullWord, AlignmentModel::kNullId}};

  const size_t n_pairs = bitext.pairs.size();
  std::vector<std::vector<uint32_t>> src_ids(n_pairs);
  std::vector<std::vector<uint32_t>> tgt_ids(n_pairs);
  for (size_t p = 0; p < n_pairs; ++p) {
    const auto& pair = bitext.pairs[p];
    src_ids[p].reserve(pair.source.size());
    for (const auto& tok : pair.source) {
      src_ids[p].push_back(intern(model.source_words_, model.source_ids_, tok));
    }
    tgt_ids[p].reserve(pair.target.size());
    for (const auto& tok : pair.target) {
      tgt_ids[p].push_back(intern(model.target_words_, model.target_ids_, tok));
    }
  }

  const size_t v_src = model.source_words_.size();
  const double uniform = 1.0 / static_cast<double>(std::max<size_t>(1, model.target_words_.size()));
  const size_t workers = resolve_workers(options.workers);
  const double p_null = options.p_null;

  for (uint32_t iter = 0; iter < options.iterations; ++iter) {
    const bool first = iter == 0;
    const double lambda = model.lambda_;
    std::vector<EStepAccum> accums(std::min(workers, n_pairs));

    parallel_chunks(n_pairs, workers, [&](size_t chunk, size_t begin, size_t end) {
      EStepAccum& acc = accums[chunk];
      acc.counts.assign(v_src, {});
      DeltaCache deltas(lambda);
      std::vector<double> terms;
      for (size_t p = begin; p < end; ++p) {
        const auto& S = src_ids[p];
        const auto& T = tgt_ids[p];
        const uint32_t m = static_cast<uint32_t>(S.size());
        const uint32_t n = static_cast<uint32_t>(T.size());
        if (m == 0 || n == 0) continue;
        const double* prior = deltas.rows(m, n);
        terms.resize(m);
        for (uint32_t j = 0; j < n; ++j) {
          const uint32_t tid = T[j];
          const double* row = prior + static_cast<size_t>(j) * m;
          const double t_null = first ? uniform : model.prob(AlignmentModel::kNullId, tid);
          const double null_term = p_null * t_null;
          double denom = null_term;
          for (uint32_t i = 0; i < m; ++i) {
            const double t_ij = first ? uniform : model.prob(S[i], tid);
            terms[i] = (1.0 - p_null) * row[i] * t_ij;
            denom += terms[i];
          }
          acc.loglik += std::log(denom);
          const double inv = 1.0 / denom;
          acc.counts[AlignmentModel::kNullId][tid] += null_term * inv;
          const double jr = static_cast<double>(j + 1) / n;
          for (uint32_t i = 0; i < m; ++i) acc.counts[S[i]][tid] += terms[i] * inv;
          if (options.optimize_lambda) {
            double gamma_sum = 0.0;
            double prior_exp = 0.0;
            for (uint32_t i = 0; i < m; ++i) {
              const double h = std::abs(static_cast<double>(i + 1) / m - jr);
              acc.posterior_h += terms[i] * inv * h;
              gamma_sum += terms[i] * inv;
              prior_exp += row[i] * h;
            }
            acc.prior_h += gamma_sum * prior_exp;
          }
          acc.tokens += 1.0;
        }
      }
    });

    CountTable counts(v_src);
    double loglik = 0.0;
    double posterior_h = 0.0;
    double prior_h = 0.0;
    double tokens = 0.0;
    for (const auto& acc : accums) {
      loglik += acc.loglik;
      posterior_h += acc.posterior_h;
      prior_h += acc.prior_h;
      tokens += acc.tokens;
      for (size_t sid = 0; sid < acc.counts.size(); ++sid) {
        for (const auto& [tid, c] : acc.counts[sid]) counts[sid][tid] += c;
      }
    }
    model.iteration_loglik_.push_back(loglik);

    model.t_.assign(v_src, {});
    for (size_t sid = 0; sid < v_src; ++sid) {
      AlignmentModel::Row row(counts[sid].begin(), counts[sid].end());
      if (row.empty()) continue;
      std::sort(row.begin(), row.end());
      double sum = 0.0;
      for (const auto& [tid, c] : row) sum += c;
      if (sum <= 0.0) continue;
      AlignmentModel::Row kept;
      kept.reserve(row.size());
      for (const auto& [tid, c] : row) {
        const double p = c / sum;
        if (p >= options.prune_threshold) kept.emplace_back(tid, p);
      }
      if (kept.empty()) kept.emplace_back(row.front().first, 1.0);
      double kept_sum = 0.0;
      for (const auto& [tid, p] : kept) kept_sum += p;
      for (auto& [tid, p] : kept) p /= kept_sum;
      model.t_[sid] = std::move(kept);
    }

    if (options.optimize_lambda && tokens > 0.0) {
      const double gradient = (prior_h - posterior_h) / tokens;
      model.lambda_ = std::clamp(model.lambda_ + 20.0 * gradient, 0.1, 20.0);
    }
  }
  return model;
}

AlignmentLinks viterbi_align(const AlignmentModel& model, const SentencePair& pair) {
  const uint32_t m = static_cast<uint32_t>(pair.source.size());
  const uint32_t n = static_cast<uint32_t>(pair.target.size());
  AlignmentLinks links;
  if (m == 0 || n == 0) return links;

  std::vector<uint32_t> sids(m);
  for (uint32_t i = 0; i < m; ++i) sids[i] = model.source_id(pair.source[i]);

  const double lambda = model.lambda();
  const double p_null = model.p_null();
  std::vector<double> prior(m);
  for (uint32_t j = 0; j < n; ++j) {
    const uint32_t tid = model.target_id(pair.target[j]);
    const double jr = static_cast<double>(j + 1) / n;
    double z = 0.0;
    for (uint32_t i = 0; i < m; ++i) {
      prior[i] = std::exp(-lambda * std::abs(static_cast<double>(i + 1) / m - jr));
      z += prior[i];
    }
    // Null is position zero, so it wins exact ties with any source position.
    double best = p_null * model.prob(AlignmentModel::kNullId, tid);
    std::optional<uint32_t> best_i;
    for (uint32_t i = 0; i < m; ++i) {
      const double score = (1.0 - p_null) * (prior[i] / z) * model.prob(sids[i], tid);
      if (score > best) {
        best = score;
        best_i = i;
      }
    }
    if (best_i) links.push_back({*best_i, j});
  }
  return links;
}

std::optional<std::pair<uint32_t, uint32_t>> project_span(const AlignmentLinks& links,
                                                          uint32_t src_start, uint32_t src_end,
                                                          uint32_t target_len) {
  uint32_t lo = UINT32_MAX;
  uint32_t hi = 0;
  bool any = false;
  for (const auto& link : links) {
    if (link.src >= src_start && link.src < src_end) {
      lo = std::min(lo, link.tgt);
      hi = std::max(hi, link.tgt);
      any = true;
    }
  }
  if (!any || hi >= target_len) return std::nullopt;
  for (const auto& link : links) {
    if (link.tgt >= lo && link.tgt <= hi && (link.src < src_start || link.src >= src_end)) {
      return std::nullopt;
    }
  }
  return std::make_pair(lo, hi + 1);
}

void write_pharaoh(const std::filesystem::path& path,
                   const std::vector<AlignmentLinks>& alignments) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path.string());
  for (const auto& links : alignments) {
    for (size_t k = 0; k < links.size(); ++k) {
      if (k > 0) os << ' ';
      os << links[k].src << '-' << links[k].tgt;
    }
    os << '\n';
  }
  if (!os.flush()) throw Error("write failed: " + path.string());
}

void AlignmentModel::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os.write(kModelMagic, sizeof(kModelMagic));
  write_le<uint32_t>(os, kModelVersion);
  write_le<double>(os, lambda_);
  write_le<double>(os, p_null_);
  write_le<uint32_t>(os, static_cast<uint32_t>(iteration_loglik_.size()));
  for (double ll : iteration_loglik_) write_le<double>(os, ll);
  write_le<uint64_t>(os, source_words_.size());
  for (const auto& w : source_words_) write_lp_string(os, w);
  write_le<uint64_t>(os, target_words_.size());
  for (const auto& w : target_words_) write_lp_string(os, w);
  write_le<uint64_t>(os, t_.size());
  for (const auto& row : t_) {
    write_le<uint64_t>(os, row.size());
    for (const auto& [tid, p] : row) {
      write_le<uint32_t>(os, tid);
      write_le<double>(os, p);
    }
  }
  if (!os.flush()) throw Error("write failed: " + path.string());
}

AlignmentModel AlignmentModel::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw Error("not an alignment model file: " + path.string());
  }
  const uint32_t version = read_le<uint32_t>(is);
  if (version != kModelVersion) {
    throw Error("unsupported alignment model version " + std::to_string(version) + " in " +
                path.string());
  }
  AlignmentModel model;
  model.lambda_ = read_le<double>(is);
  model.p_null_ = read_le<double>(is);
  const uint32_t n_ll = read_le<uint32_t>(is);
  model.iteration_loglik_.resize(n_ll);
  for (auto& ll : model.iteration_loglik_) ll = read_le<double>(is);
  const uint64_t v_src = read_le<uint64_t>(is);
  model.source_words_.reserve(v_src);
  for (uint64_t i = 0; i < v_src; ++i) {
    model.source_words_.push_back(read_lp_string(is));
    model.source_ids_.emplace(model.source_words_.back(), static_cast<uint32_t>(i));
  }
  const uint64_t v_tgt = read_le<uint64_t>(is);
  model.target_words_.reserve(v_tgt);
  for (uint64_t i = 0; i < v_tgt; ++i) {
    model.target_words_.push_back(read_lp_string(is));
    model.target_ids_.emplace(model.target_words_.back(), static_cast<uint32_t>(i));
  }
  const uint64_t n_rows = read_le<uint64_t>(is);
  model.t_.resize(n_rows);
  for (uint64_t sid = 0; sid < n_rows; ++sid) {
    const uint64_t n_entries = read_le<uint64_t>(is);
    auto& row = model.t_[sid];
    row.resize(n_entries);
    for (auto& [tid, p] : row) {
      tid = read_le<uint32_t>(is);
      p = read_le<double>(is);
    }
  }
  return model;
}

} // namespace dictaug
