#include "dictaug/coverage.hpp"

#include <algorithm>
#include <fstream>

#include "dictaug/error.hpp"
#include "dictaug/text.hpp"
#include "dictaug/util.hpp"

#include "json.hpp"

namespace dictaug {

namespace {

std::vector<std::string> sorted_terms(const std::unordered_set<std::string>& terms) {
  std::vector<std::string> out(terms.begin(), terms.end());
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json histogram_json(const TermHistogram& hist) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t n = 1; n <= 5; ++n) j[std::to_string(n)] = hist[n];
  return j;
}

TermHistogram histogram_from_json(const nlohmann::json& j) {
  TermHistogram hist{};
  for (size_t n = 1; n <= 5; ++n) hist[n] = j.at(std::to_string(n)).get<uint64_t>();
  return hist;
}

nlohmann::json termset_json(const TermSet& set, const TermHistogram& hist) {
  return nlohmann::json{{"label", set.label},
                        {"count", set.terms.size()},
                        {"histogram", histogram_json(hist)},
                        {"terms", sorted_terms(set.terms)}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path.string());
  os << content;
  if (!os.flush()) throw Error("write failed: " + path.string());
}

std::filesystem::path companion_terms_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p.replace_extension(".terms.txt");
  return p;
}

void write_terms_listing(const std::filesystem::path& path,
                         const std::unordered_set<std::string>& terms) {
  std::string body;
  for (const auto& term : sorted_terms(terms)) {
    body += term;
    body += '\n';
  }
  write_text_file(path, body);
}

std::string csv_rows(const TermHistogram& hist) {
  std::string body;
  for (size_t n = 1; n <= 5; ++n) {
    if (hist[n] == 0) continue;
    body += std::to_string(n);
    body += ',';
    body += std::to_string(hist[n]);
    body += '\n';
  }
  return body;
}

} // namespace

size_t term_length(std::string_view term) {
  if (term.empty()) return 0;
  return static_cast<size_t>(std::count(term.begin(), term.end(), ' ')) + 1;
}

TermHistogram histogram_of(const std::unordered_set<std::string>& terms) {
  TermHistogram hist{};
  for (const auto& term : terms) {
    const size_t n = term_length(term);
    if (n >= 1 && n <= 5) ++hist[n];
  }
  return hist;
}

TermSet extract_ngrams(const std::vector<std::vector<std::string>>& corpus, std::string label,
                       size_t n_min, size_t n_max, bool fold_case, size_t workers) {
  if (n_min < 1 || n_min > n_max || n_max > 5) {
    throw Error("extract_ngrams: need 1 <= n_min <= n_max <= 5");
  }
  const size_t n_chunks = std::min(resolve_workers(workers), std::max<size_t>(1, corpus.size()));
  std::vector<std::unordered_set<std::string>> partial(n_chunks);

  parallel_chunks(corpus.size(), n_chunks, [&](size_t chunk, size_t begin, size_t end) {
    auto& set = partial[chunk];
    std::string gram;
    for (size_t s = begin; s < end; ++s) {
      const auto& tokens = corpus[s];
      for (size_t i = 0; i < tokens.size(); ++i) {
        gram.clear();
        for (size_t n = 1; n <= n_max && i + n <= tokens.size(); ++n) {
          if (n > 1) gram += ' ';
          gram += fold_case ? fold_lower(tokens[i + n - 1]) : tokens[i + n - 1];
          if (n >= n_min) set.insert(gram);
        }
      }
    }
  });

  TermSet out;
  out.label = std::move(label);
  for (auto& set : partial) {
    if (out.terms.empty()) {
      out.terms = std::move(set);
    } else {
      out.terms.insert(set.begin(), set.end());
    }
  }
  return out;
}

DictionaryTerms terms_from_dictionary(const DomainDictionary& dict, DictionarySide side,
                                      bool fold_case) {
  DictionaryTerms out;
  out.terms.label = dict.name;
  for (const auto& entry : dict.entries) {
    const auto& tokens = side == DictionarySide::Source ? entry.src : entry.tgt;
    if (tokens.size() > 5) {
      ++out.excluded_over_limit;
      continue;
    }
    std::string term;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) term += ' ';
      term += fold_case ? fold_lower(tokens[i]) : tokens[i];
    }
    out.terms.terms.insert(std::move(term));
  }
  return out;
}

CoverageReport enhanced_domain_coverage(const TermSet& corpus_terms, const TermSet& dict_terms,
                                        const TermSet& test_terms) {
  CoverageReport report;
  report.dictionary = dict_terms.label;
  report.corpus = corpus_terms.label;
  report.testset = test_terms.label;
  report.matched_terms.label = corpus_terms.label;
  for (const auto& term : dict_terms.terms) {
    if (corpus_terms.terms.count(term) && test_terms.terms.count(term)) {
      report.matched_terms.terms.insert(term);
    }
  }
  report.ed_value = report.matched_terms.terms.size();
  report.histogram = histogram_of(report.matched_terms.terms);
  return report;
}

CoverageGain coverage_gain(const CoverageReport& gen_report, const CoverageReport& train_report) {
  if (gen_report.dictionary != train_report.dictionary ||
      gen_report.testset != train_report.testset) {
    throw Error("coverage_gain: reports disagree on dictionary/testset (" +
                gen_report.dictionary + "/" + gen_report.testset + " vs " +
                train_report.dictionary + "/" + train_report.testset + ")");
  }
  CoverageGain out;
  out.new_terms.label = gen_report.corpus + "-minus-" + train_report.corpus;
  for (const auto& term : gen_report.matched_terms.terms) {
    if (!train_report.matched_terms.terms.count(term)) out.new_terms.terms.insert(term);
  }
  out.gain = out.new_terms.terms.size();
  out.histogram = histogram_of(out.new_terms.terms);
  return out;
}

TermDiff term_diff(const CoverageReport& report_a, const CoverageReport& report_b) {
  if (report_a.dictionary != report_b.dictionary || report_a.testset != report_b.testset) {
    throw Error("term_diff: reports disagree on dictionary/testset (" + report_a.dictionary +
                "/" + report_a.testset + " vs " + report_b.dictionary + "/" + report_b.testset +
                ")");
  }
  TermDiff diff;
  diff.a_label = report_a.corpus;
  diff.b_label = report_b.corpus;
  diff.a_minus_b.label = report_a.corpus + "-minus-" + report_b.corpus;
  diff.b_minus_a.label = report_b.corpus + "-minus-" + report_a.corpus;
  diff.intersection.label = report_a.corpus + "-and-" + report_b.corpus;
  for (const auto& term : report_a.matched_terms.terms) {
    if (report_b.matched_terms.terms.count(term)) {
      diff.intersection.terms.insert(term);
    } else {
      diff.a_minus_b.terms.insert(term);
    }
  }
  for (const auto& term : report_b.matched_terms.terms) {
    if (!report_a.matched_terms.terms.count(term)) diff.b_minus_a.terms.insert(term);
  }
  diff.a_minus_b_histogram = histogram_of(diff.a_minus_b.terms);
  diff.b_minus_a_histogram = histogram_of(diff.b_minus_a.terms);
  diff.intersection_histogram = histogram_of(diff.intersection.terms);
  return diff;
}

void emit_report(const CoverageReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json j{{"dictionary", report.dictionary},
                     {"corpus", report.corpus},
                     {"testset", report.testset},
                     {"ed_value", report.ed_value},
                     {"histogram", histogram_json(report.histogram)},
                     {"terms", sorted_terms(report.matched_terms.terms)}};
    write_text_file(path, j.dump(2) + "\n");
    return;
  }
  write_text_file(path, csv_rows(report.histogram));
  write_terms_listing(companion_terms_path(path), report.matched_terms.terms);
}

void emit_report(const TermDiff& diff, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json j{{"a", diff.a_label},
                     {"b", diff.b_label},
                     {"a_minus_b", termset_json(diff.a_minus_b, diff.a_minus_b_histogram)},
                     {"b_minus_a", termset_json(diff.b_minus_a, diff.b_minus_a_histogram)},
                     {"intersection", termset_json(diff.intersection, diff.intersection_histogram)}};
    write_text_file(path, j.dump(2) + "\n");
    return;
  }
  std::string body;
  const auto section = [&body](const std::string& name, const TermHistogram& hist) {
    for (size_t n = 1; n <= 5; ++n) {
      if (hist[n] == 0) continue;
      body += name;
      body += ',';
      body += std::to_string(n);
      body += ',';
      body += std::to_string(hist[n]);
      body += '\n';
    }
  };
  section("a_minus_b", diff.a_minus_b_histogram);
  section("b_minus_a", diff.b_minus_a_histogram);
  section("intersection", diff.intersection_histogram);
  write_text_file(path, body);
  std::filesystem::path terms = path;
  terms.replace_extension(".a_minus_b.terms.txt");
  write_terms_listing(terms, diff.a_minus_b.terms);
  terms = path;
  terms.replace_extension(".b_minus_a.terms.txt");
  write_terms_listing(terms, diff.b_minus_a.terms);
  terms = path;
  terms.replace_extension(".intersection.terms.txt");
  write_terms_listing(terms, diff.intersection.terms);
}

void emit_report(const CoverageGain& gain, const std::filesystem::path& path,
                 ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json j{{"label", gain.new_terms.label},
                     {"gain", gain.gain},
                     {"histogram", histogram_json(gain.histogram)},
                     {"terms", sorted_terms(gain.new_terms.terms)}};
    write_text_file(path, j.dump(2) + "\n");
    return;
  }
  write_text_file(path, csv_rows(gain.histogram));
  write_terms_listing(companion_terms_path(path), gain.new_terms.terms);
}

CoverageReport read_report_json(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path.string());
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded()) throw Error("invalid JSON report: " + path.string());
  CoverageReport report;
  report.dictionary = j.at("dictionary").get<std::string>();
  report.corpus = j.at("corpus").get<std::string>();
  report.testset = j.at("testset").get<std::string>();
  report.ed_value = j.at("ed_value").get<uint64_t>();
  report.histogram = histogram_from_json(j.at("histogram"));
  report.matched_terms.label = report.corpus;
  for (const auto& term : j.at("terms")) {
    report.matched_terms.terms.insert(term.get<std::string>());
  }
  return report;
}

} // namespace dictaug
