#include "dictaug/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "dictaug/error.hpp"
#include "dictaug/text.hpp"
#include "dictaug/util.hpp"

namespace dictaug {

namespace fs = std::filesystem;

namespace {

constexpr size_t kEntryBatch = 256;

class StageTimer {
public:
  // Milliseconds since construction or the previous lap.
  double lap_ms() {
    const auto now = Clock::now();
    const std::chrono::duration<double, std::milli> d = now - last_;
    last_ = now;
    return d.count();
  }

  double total_ms() const {
    const std::chrono::duration<double, std::milli> d = Clock::now() - start_;
    return d.count();
  }

private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
  Clock::time_point last_ = start_;
};

std::string hex16(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::json input_entry(const fs::path& path) {
  return {{"path", path.string()}, {"checksum", checksum_file(path)}};
}

std::string file_label(const fs::path& path) { return path.stem().string(); }

void merge_skips(GenerationStats& into, const GenerationStats& delta) {
  into.attempted += delta.attempted;
  into.skipped_no_embedding += delta.skipped_no_embedding;
  into.skipped_no_phrase += delta.skipped_no_phrase;
  into.skipped_below_floor += delta.skipped_below_floor;
  into.skipped_no_projection += delta.skipped_no_projection;
  into.skipped_identity += delta.skipped_identity;
}

nlohmann::json stats_json(const GenerationStats& stats, uint64_t truncated) {
  return {{"attempted", stats.attempted},
          {"generated", stats.generated},
          {"skipped_no_embedding", stats.skipped_no_embedding},
          {"skipped_no_phrase", stats.skipped_no_phrase},
          {"skipped_below_floor", stats.skipped_below_floor},
          {"skipped_no_projection", stats.skipped_no_projection},
          {"skipped_identity", stats.skipped_identity},
          {"deduped", stats.deduped},
          {"truncated", truncated},
          {"accounting_consistent",
           stats.attempted ==
               stats.generated + stats.skipped_total() + stats.deduped + truncated}};
}

} // namespace

std::string checksum_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path.string());
  uint64_t h = 0xcbf29ce484222325ULL;
  std::vector<char> buf(1 << 20);
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = is.gcount();
    if (got > 0) h = fnv1a64(buf.data(), static_cast<size_t>(got), h);
  }
  if (is.bad()) throw Error("read failed: " + path.string());
  return hex16(h);
}

void PipelineConfig::validate(bool require_dictionary) const {
  const auto require = [](const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key: ") + key);
  };
  require(bitext_source, "bitext_source");
  require(bitext_target, "bitext_target");
  require(output_dir, "output_dir");
  if (require_dictionary) require(dictionary, "dictionary");
  require(source_lang, "source_lang");
  require(target_lang, "target_lang");
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
  if (embedding_dim < 8) throw ConfigError("embedding_dim must be >= 8");
  if (ann_nprobe < 1) throw ConfigError("ann_nprobe must be >= 1");
  if (ann_max_iters < 1) throw ConfigError("ann_max_iters must be >= 1");
  if (align_iterations < 1) throw ConfigError("align_iterations must be >= 1");
  if (align_p_null <= 0.0 || align_p_null >= 1.0) {
    throw ConfigError("align_p_null must be in (0, 1)");
  }
  if (align_lambda <= 0.0) throw ConfigError("align_lambda must be positive");
  if (phrase_max_len < 1 || phrase_max_len > 5) {
    throw ConfigError("phrase_max_len must be in [1, 5]");
  }
  if (sim_floor > 1.0) throw ConfigError("sim_floor must be <= 1");
}

nlohmann::json PipelineConfig::to_json() const {
  return {{"bitext_source", bitext_source},
          {"bitext_target", bitext_target},
          {"dictionary", dictionary},
          {"embeddings", embeddings},
          {"lexicon", lexicon},
          {"output_dir", output_dir},
          {"cache_dir", cache_dir},
          {"source_lang", source_lang},
          {"target_lang", target_lang},
          {"top_n", top_n},
          {"max_pairs", max_pairs},
          {"sim_floor", sim_floor},
          {"phrase_max_len", phrase_max_len},
          {"keep_identity", keep_identity},
          {"dedup_input", dedup_input},
          {"dedup_output", dedup_output},
          {"mix_with_ood", mix_with_ood},
          {"retain_pairs", retain_pairs},
          {"embedding_dim", embedding_dim},
          {"embedding_seed", embedding_seed},
          {"ann_clusters", ann_clusters},
          {"ann_nprobe", ann_nprobe},
          {"ann_seed", ann_seed},
          {"ann_max_iters", ann_max_iters},
          {"align_iterations", align_iterations},
          {"align_lambda", align_lambda},
          {"align_p_null", align_p_null},
          {"align_optimize_lambda", align_optimize_lambda},
          {"mix_seed", mix_seed},
          {"mix_shuffle", mix_shuffle},
          {"workers", workers}};
}

void RunManifest::save(const fs::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os << doc.dump(2) << '\n';
  if (!os.flush()) throw Error("write failed: " + path.string());
}

RunManifest RunManifest::load(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path.string());
  RunManifest m;
  m.doc = nlohmann::json::parse(is, nullptr, false);
  if (m.doc.is_discarded()) throw Error("invalid manifest JSON: " + path.string());
  return m;
}

nlohmann::json RunManifest::stable_view() const {
  nlohmann::json copy = doc;
  copy.erase("timings_ms");
  return copy;
}

GenerateResult run_generate(const PipelineConfig& config) {
  config.validate();
  return run_generate(config, load_dictionary(config.dictionary));
}

GenerateResult run_generate(const PipelineConfig& config, const DomainDictionary& dict) {
  config.validate(/*require_dictionary=*/false);
  const fs::path out_dir(config.output_dir);
  const fs::path cache_dir = config.cache_dir.empty() ? out_dir / "cache" : fs::path(config.cache_dir);
  fs::create_directories(out_dir);
  fs::create_directories(cache_dir);

  StageTimer timer;
  nlohmann::json timings = nlohmann::json::object();

  Bitext bitext = load_bitext(config.bitext_source, config.bitext_target, config.source_lang,
                              config.target_lang, config.workers);
  uint64_t input_duplicates = 0;
  if (config.dedup_input) bitext = deduplicate(bitext, &input_duplicates);
  if (bitext.pairs.empty()) {
    throw Error("bitext is empty after loading: " + config.bitext_source + " / " +
                config.bitext_target);
  }
  timings["load_bitext"] = timer.lap_ms();

  const bool strict = !config.embeddings.empty();
  const size_t n_sentences = bitext.pairs.size();

  // Lookup store: in strict mode the external file (sentences + any phrase
  // surfaces), otherwise fallback sentence embeddings.
  EmbeddingStore store = [&] {
    if (strict) {
      EmbeddingStore loaded = load_embeddings(config.embeddings);
      for (size_t id = 0; id < n_sentences; ++id) {
        if (!loaded.find(EmbeddingStore::sentence_key(static_cast<uint32_t>(id)))) {
          throw Error("embeddings file " + config.embeddings + " is missing sentence id " +
                      std::to_string(id));
        }
      }
      return loaded;
    }
    EmbeddingStore built(config.embedding_dim);
    std::vector<Vec> vecs(n_sentences);
    std::vector<std::string> errors(resolve_workers(config.workers));
    parallel_chunks(n_sentences, config.workers, [&](size_t chunk, size_t begin, size_t end) {
      try {
        for (size_t k = begin; k < end; ++k) {
          vecs[k] = fallback_embed(join_tokens(bitext.pairs[k].source), config.embedding_dim,
                                   config.embedding_seed);
        }
      } catch (const std::exception& e) {
        errors[chunk] = e.what();
      }
    });
    for (const auto& err : errors) {
      if (!err.empty()) throw Error("while embedding sentences: " + err);
    }
    for (size_t k = 0; k < n_sentences; ++k) {
      built.add(EmbeddingStore::sentence_key(static_cast<uint32_t>(k)), std::move(vecs[k]));
    }
    return built;
  }();
  timings["embeddings"] = timer.lap_ms();

  const std::string src_sum = checksum_file(config.bitext_source);
  const std::string tgt_sum = checksum_file(config.bitext_target);
  const std::string emb_basis =
      strict ? "file:" + checksum_file(config.embeddings)
             : "fallback:dim=" + std::to_string(config.embedding_dim) +
                   ":seed=" + std::to_string(config.embedding_seed) + ":src=" + src_sum;

  // --- ANN index, cached on the inputs that determine it ------------------
  const std::string index_desc = "ivf|" + emb_basis + "|dedup=" +
                                 std::to_string(config.dedup_input ? 1 : 0) +
                                 "|clusters=" + std::to_string(config.ann_clusters) +
                                 "|seed=" + std::to_string(config.ann_seed) +
                                 "|iters=" + std::to_string(config.ann_max_iters);
  const std::string index_key = hex16(fnv1a64(index_desc));
  const fs::path index_path = cache_dir / ("index-" + index_key + ".bin");
  bool index_hit = false;
  AnnIndex index = [&] {
    if (fs::exists(index_path)) {
      try {
        AnnIndex loaded = AnnIndex::load(index_path);
        index_hit = true;
        return loaded;
      } catch (const Error&) {
        // Corrupt cache entry: fall through and rebuild.
      }
    }
    BuildOptions opts;
    opts.clusters = static_cast<uint32_t>(config.ann_clusters);
    opts.seed = config.ann_seed;
    opts.max_iters = static_cast<uint32_t>(config.ann_max_iters);
    opts.workers = config.workers;
    AnnIndex built = [&] {
      if (!strict) return AnnIndex::build(store, opts);
      // The external store may also hold phrase-surface keys; the index is
      // built over the sentence rows only.
      EmbeddingStore sentences(store.dim());
      for (size_t id = 0; id < n_sentences; ++id) {
        const std::string key = EmbeddingStore::sentence_key(static_cast<uint32_t>(id));
        const auto row = store.row(*store.find(key));
        sentences.add(key, Vec(row.begin(), row.end()));
      }
      return AnnIndex::build(sentences, opts);
    }();
    built.save(index_path);
    return built;
  }();
  timings["index"] = timer.lap_ms();

  // --- Alignment model, cached --------------------------------------------
  const std::string align_desc =
      "align|" + src_sum + "|" + tgt_sum + "|dedup=" + std::to_string(config.dedup_input ? 1 : 0) +
      "|iters=" + std::to_string(config.align_iterations) +
      "|lambda=" + std::to_string(config.align_lambda) +
      "|pnull=" + std::to_string(config.align_p_null) +
      "|opt=" + std::to_string(config.align_optimize_lambda ? 1 : 0);
  const std::string align_key = hex16(fnv1a64(align_desc));
  const fs::path align_path = cache_dir / ("align-" + align_key + ".bin");
  bool align_hit = false;
  AlignmentModel model = [&] {
    if (fs::exists(align_path)) {
      try {
        AlignmentModel loaded = AlignmentModel::load(align_path);
        align_hit = true;
        return loaded;
      } catch (const Error&) {
      }
    }
    TrainOptions opts;
    opts.iterations = static_cast<uint32_t>(config.align_iterations);
    opts.lambda_init = config.align_lambda;
    opts.p_null = config.align_p_null;
    opts.optimize_lambda = config.align_optimize_lambda;
    opts.workers = config.workers;
    AlignmentModel trained = train_alignment(bitext, opts);
    trained.save(align_path);
    return trained;
  }();
  timings["alignment"] = timer.lap_ms();

  const TagLexicon lexicon = config.lexicon.empty()
                                 ? TagLexicon::from_entries({}, config.source_lang)
                                 : TagLexicon::load(config.lexicon, config.source_lang);

  // --- Generation loop ------------------------------------------------------
  GenerateResult result;
  result.source_path = out_dir / ("pseudo." + config.source_lang);
  result.target_path = out_dir / ("pseudo." + config.target_lang);
  result.provenance_path = out_dir / "provenance.jsonl";
  result.manifest_path = out_dir / "manifest.json";
  result.corpus.source_lang = config.source_lang;
  result.corpus.target_lang = config.target_lang;

  std::ofstream out_src(result.source_path, std::ios::binary);
  if (!out_src) throw Error("cannot open for writing: " + result.source_path.string());
  std::ofstream out_tgt(result.target_path, std::ios::binary);
  if (!out_tgt) throw Error("cannot open for writing: " + result.target_path.string());
  std::ofstream out_prov(result.provenance_path, std::ios::binary);
  if (!out_prov) throw Error("cannot open for writing: " + result.provenance_path.string());

  const uint32_t eff_nprobe =
      static_cast<uint32_t>(std::min<uint64_t>(config.ann_nprobe, index.clusters()));

  const SpanEmbedder embedder = [&](const std::string& surface) -> Vec {
    if (strict) {
      const auto i = store.find(surface);
      const auto row = store.row(*i); // presence pre-checked per candidate
      return Vec(row.begin(), row.end());
    }
    return fallback_embed(surface, store.dim(), config.embedding_seed);
  };

  const auto process_entry = [&](const DictionaryEntry& entry, std::vector<PseudoPair>& out,
                                 GenerationStats& st) {
    const std::string surface = join_tokens(entry.src);
    Vec query;
    if (strict) {
      const auto i = store.find(surface);
      if (!i) {
        ++st.attempted;
        ++st.skipped_no_embedding;
        return;
      }
      const auto row = store.row(*i);
      query.assign(row.begin(), row.end());
    } else {
      query = fallback_embed(surface, store.dim(), config.embedding_seed);
    }

    const auto hits = index.search(query, config.top_n, eff_nprobe);
    for (const auto& hit : hits) {
      ++st.attempted;
      const SentencePair& tmpl = bitext.pairs[hit.sentence_id];
      const auto tagged = pos_tag(tmpl.source, lexicon);
      auto spans = extract_noun_phrases(tagged, static_cast<uint32_t>(config.phrase_max_len));
      if (spans.empty()) {
        ++st.skipped_no_phrase;
        continue;
      }
      if (strict) {
        std::vector<PhraseSpan> usable;
        usable.reserve(spans.size());
        for (auto& span : spans) {
          if (store.find(span.surface)) usable.push_back(std::move(span));
        }
        if (usable.empty()) {
          ++st.skipped_no_embedding;
          continue;
        }
        spans = std::move(usable);
      }
      const auto match = top_sim(query, spans, embedder);
      if (config.sim_floor > 0.0 && match->score < config.sim_floor) {
        ++st.skipped_below_floor;
        continue;
      }
      const auto links = viterbi_align(model, tmpl);
      const auto projected =
          project_span(links, match->span.start, match->span.end,
                       static_cast<uint32_t>(tmpl.target.size()));
      if (!projected) {
        ++st.skipped_no_projection;
        continue;
      }
      PseudoPair pair = substitute_pair(tmpl, *match, *projected, entry);
      if (!config.keep_identity && pair.provenance.identity) {
        ++st.skipped_identity;
        continue;
      }
      out.push_back(std::move(pair));
    }
  };

  GenerationStats stats;
  uint64_t truncated = 0;
  uint64_t entries_processed = 0;
  std::unordered_set<std::string> seen;
  bool done = false;

  for (size_t batch_start = 0; batch_start < dict.entries.size() && !done;
       batch_start += kEntryBatch) {
    const size_t batch_end = std::min(batch_start + kEntryBatch, dict.entries.size());
    const size_t batch_n = batch_end - batch_start;
    std::vector<std::vector<PseudoPair>> outs(batch_n);
    std::vector<GenerationStats> deltas(batch_n);
    std::vector<std::string> errors(resolve_workers(config.workers));

    parallel_chunks(batch_n, config.workers, [&](size_t chunk, size_t begin, size_t end) {
      try {
        for (size_t k = begin; k < end; ++k) {
          process_entry(dict.entries[batch_start + k], outs[k], deltas[k]);
        }
      } catch (const std::exception& e) {
        errors[chunk] = e.what();
      }
    });
    for (const auto& err : errors) {
      if (!err.empty()) throw Error("generation failed: " + err);
    }

    for (size_t k = 0; k < batch_n; ++k) {
      ++entries_processed;
      merge_skips(stats, deltas[k]);
      for (auto& pair : outs[k]) {
        if (config.max_pairs > 0 && stats.generated >= config.max_pairs) {
          ++truncated;
          done = true;
          continue;
        }
        if (config.dedup_output &&
            !seen.insert(pseudo_pair_key(pair.g_source, pair.g_target)).second) {
          ++stats.deduped;
          continue;
        }
        out_src << join_tokens(pair.g_source) << '\n';
        out_tgt << join_tokens(pair.g_target) << '\n';
        out_prov << provenance_to_json(pair.provenance).dump() << '\n';
        ++stats.generated;
        if (config.retain_pairs) result.corpus.pairs.push_back(std::move(pair));
      }
    }
  }

  if (!out_src.flush()) throw Error("write failed: " + result.source_path.string());
  if (!out_tgt.flush()) throw Error("write failed: " + result.target_path.string());
  if (!out_prov.flush()) throw Error("write failed: " + result.provenance_path.string());
  result.corpus.stats = stats;
  timings["generate"] = timer.lap_ms();

  // --- Optional mixed training corpus --------------------------------------
  fs::path mixed_src, mixed_tgt;
  uint64_t mixed_lines = 0;
  if (config.mix_with_ood) {
    const PseudoCorpus* pseudo = &result.corpus;
    PseudoCorpus reread;
    if (!config.retain_pairs) {
      const Bitext back = load_bitext(result.source_path, result.target_path, config.source_lang,
                                      config.target_lang, config.workers);
      reread.source_lang = back.source_lang;
      reread.target_lang = back.target_lang;
      reread.pairs.reserve(back.pairs.size());
      for (const auto& p : back.pairs) {
        PseudoPair pp;
        pp.g_source = p.source;
        pp.g_target = p.target;
        reread.pairs.push_back(std::move(pp));
      }
      pseudo = &reread;
    }
    const Bitext mixed = mix_corpora(bitext, *pseudo, config.mix_seed, config.mix_shuffle);
    mixed_src = out_dir / ("mixed." + config.source_lang);
    mixed_tgt = out_dir / ("mixed." + config.target_lang);
    write_bitext(mixed, mixed_src, mixed_tgt, WriteMode::Tokenized);
    mixed_lines = mixed.pairs.size();
    timings["mix"] = timer.lap_ms();
  }

  // --- Manifest -------------------------------------------------------------
  nlohmann::json inputs;
  inputs["bitext_source"] = input_entry(config.bitext_source);
  inputs["bitext_target"] = input_entry(config.bitext_target);
  inputs["dictionary"] =
      config.dictionary.empty() ? nlohmann::json() : input_entry(config.dictionary);
  inputs["embeddings"] = strict ? input_entry(config.embeddings) : nlohmann::json();
  inputs["lexicon"] = config.lexicon.empty() ? nlohmann::json() : input_entry(config.lexicon);

  nlohmann::json counts = stats_json(stats, truncated);
  counts["sentence_pairs"] = n_sentences;
  counts["dropped_empty"] = bitext.dropped_empty;
  counts["input_duplicates_removed"] = input_duplicates;
  counts["dictionary_entries"] = dict.entries.size();
  counts["dictionary_skipped_rows"] = dict.skipped_rows;
  counts["dictionary_duplicate_rows"] = dict.duplicate_rows;
  counts["entries_processed"] = entries_processed;

  nlohmann::json outputs;
  outputs["source"] = result.source_path.string();
  outputs["target"] = result.target_path.string();
  outputs["provenance"] = result.provenance_path.string();
  outputs["lines"] = stats.generated;
  if (config.mix_with_ood) {
    outputs["mixed_source"] = mixed_src.string();
    outputs["mixed_target"] = mixed_tgt.string();
    outputs["mixed_lines"] = mixed_lines;
  }

  timings["total"] = timer.total_ms();
  result.manifest.doc = {
      {"tool", "dictaug"},
      {"op", "generate"},
      {"config", config.to_json()},
      {"inputs", inputs},
      {"cache",
       {{"index", {{"path", index_path.string()}, {"key", index_key}, {"hit", index_hit}}},
        {"alignment", {{"path", align_path.string()}, {"key", align_key}, {"hit", align_hit}}}}},
      {"counts", counts},
      {"model",
       {{"lambda", model.lambda()},
        {"p_null", model.p_null()},
        {"iteration_loglik", model.iteration_loglik()}}},
      {"outputs", outputs},
      {"timings_ms", timings},
  };
  result.manifest.save(result.manifest_path);
  return result;
}

void CoverageJob::validate() const {
  const auto require = [](const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key: ") + key);
  };
  require(dictionary, "dictionary");
  require(testset, "testset");
  require(corpus, "corpus");
  require(output_dir, "output_dir");
  if (format != "json" && format != "csv" && format != "both") {
    throw ConfigError("format must be json, csv or both (got '" + format + "')");
  }
}

CoverageRunResult run_coverage(const CoverageJob& job) {
  job.validate();
  const fs::path out_dir(job.output_dir);
  fs::create_directories(out_dir);
  StageTimer timer;

  const DomainDictionary dict = load_dictionary(job.dictionary);
  const DictionaryTerms dict_terms = terms_from_dictionary(dict, job.side, job.fold_case);
  const TermSet test_terms =
      extract_ngrams(load_tokenized_lines(job.testset, job.workers), file_label(job.testset), 1, 5,
                     job.fold_case, job.workers);

  std::vector<std::string> paths;
  paths.push_back(job.corpus);
  paths.insert(paths.end(), job.compare.begin(), job.compare.end());

  std::vector<std::string> labels;
  std::unordered_set<std::string> used;
  for (const auto& p : paths) {
    std::string label = file_label(p);
    std::string candidate = label;
    int k = 2;
    while (!used.insert(candidate).second) candidate = label + "_" + std::to_string(k++);
    labels.push_back(candidate);
  }

  const bool want_json = job.format == "json" || job.format == "both";
  const bool want_csv = job.format == "csv" || job.format == "both";

  CoverageRunResult result;
  std::vector<CoverageReport> reports;
  nlohmann::json report_index = nlohmann::json::array();
  for (size_t i = 0; i < paths.size(); ++i) {
    const TermSet corpus_terms = extract_ngrams(load_tokenized_lines(paths[i], job.workers),
                                                labels[i], 1, 5, job.fold_case, job.workers);
    CoverageReport report = enhanced_domain_coverage(corpus_terms, dict_terms.terms, test_terms);
    if (want_json) emit_report(report, out_dir / ("coverage_" + labels[i] + ".json"), ReportFormat::Json);
    if (want_csv) emit_report(report, out_dir / ("coverage_" + labels[i] + ".csv"), ReportFormat::Csv);
    report_index.push_back({{"corpus", labels[i]}, {"path", paths[i]}, {"ed_value", report.ed_value}});
    reports.push_back(std::move(report));
  }

  nlohmann::json gain_index = nlohmann::json::array();
  for (size_t i = 1; i < reports.size(); ++i) {
    CoverageGain gain = coverage_gain(reports[0], reports[i]);
    TermDiff diff = term_diff(reports[0], reports[i]);
    const std::string pair_name = labels[0] + "_vs_" + labels[i];
    if (want_json) {
      emit_report(gain, out_dir / ("gain_" + pair_name + ".json"), ReportFormat::Json);
      emit_report(diff, out_dir / ("diff_" + pair_name + ".json"), ReportFormat::Json);
    }
    if (want_csv) {
      emit_report(gain, out_dir / ("gain_" + pair_name + ".csv"), ReportFormat::Csv);
      emit_report(diff, out_dir / ("diff_" + pair_name + ".csv"), ReportFormat::Csv);
    }
    gain_index.push_back({{"over", labels[i]}, {"gain", gain.gain}});
    result.gains.push_back(std::move(gain));
    result.diffs.push_back(std::move(diff));
  }

  nlohmann::json inputs;
  inputs["dictionary"] = input_entry(job.dictionary);
  inputs["testset"] = input_entry(job.testset);
  nlohmann::json corpora = nlohmann::json::array();
  for (const auto& p : paths) corpora.push_back(input_entry(p));
  inputs["corpora"] = corpora;

  result.manifest.doc = {
      {"tool", "dictaug"},
      {"op", "coverage"},
      {"config",
       {{"dictionary", job.dictionary},
        {"testset", job.testset},
        {"corpus", job.corpus},
        {"compare", job.compare},
        {"output_dir", job.output_dir},
        {"side", job.side == DictionarySide::Source ? "source" : "target"},
        {"fold_case", job.fold_case},
        {"format", job.format},
        {"workers", job.workers}}},
      {"inputs", inputs},
      {"counts",
       {{"dictionary_entries", dict.entries.size()},
        {"dictionary_terms", dict_terms.terms.terms.size()},
        {"dictionary_excluded_over_limit", dict_terms.excluded_over_limit},
        {"test_terms", test_terms.terms.size()}}},
      {"reports", report_index},
      {"gains", gain_index},
      {"timings_ms", {{"total", timer.total_ms()}}},
  };
  result.manifest.save(out_dir / "coverage_manifest.json");

  result.primary = std::move(reports.front());
  result.comparisons.assign(std::make_move_iterator(reports.begin() + 1),
                            std::make_move_iterator(reports.end()));
  return result;
}

Bitext mix_corpora(const Bitext& ood, const PseudoCorpus& pseudo, uint64_t shuffle_seed,
                   bool shuffle) {
  if (ood.source_lang != pseudo.source_lang || ood.target_lang != pseudo.target_lang) {
    throw Error("mix_corpora: language tags disagree (" + ood.source_lang + "-" +
                ood.target_lang + " vs " + pseudo.source_lang + "-" + pseudo.target_lang + ")");
  }
  Bitext mixed;
  mixed.source_lang = ood.source_lang;
  mixed.target_lang = ood.target_lang;
  mixed.pairs.reserve(ood.pairs.size() + pseudo.pairs.size());
  mixed.pairs = ood.pairs;
  for (const auto& pp : pseudo.pairs) {
    SentencePair p;
    p.source = pp.g_source;
    p.target = pp.g_target;
    p.raw_source = join_tokens(p.source);
    p.raw_target = join_tokens(p.target);
    mixed.pairs.push_back(std::move(p));
  }
  if (shuffle) {
    DetRng rng(shuffle_seed);
    rng.shuffle(mixed.pairs);
  }
  for (size_t i = 0; i < mixed.pairs.size(); ++i) {
    mixed.pairs[i].id = static_cast<uint32_t>(i);
  }
  return mixed;
}

} // namespace dictaug
