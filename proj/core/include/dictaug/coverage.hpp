#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "dictaug/corpusio.hpp"

namespace dictaug {

// Terms are space-joined token sequences of 1-5 tokens.
struct TermSet {
  std::unordered_set<std::string> terms;
  std::string label;
};

// Token count of a space-joined term.
size_t term_length(std::string_view term);

// Histogram over term lengths; index 0 unused.
using TermHistogram = std::array<uint64_t, 6>;
TermHistogram histogram_of(const std::unordered_set<std::string>& terms);

// All unique contiguous n-grams, n in [n_min, n_max], exact match. fold_case
// lowercases tokens first.
TermSet extract_ngrams(const std::vector<std::vector<std::string>>& corpus, std::string label,
                       size_t n_min = 1, size_t n_max = 5, bool fold_case = false,
                       size_t workers = 0);

enum class DictionarySide { Source, Target };

struct DictionaryTerms {
  TermSet terms;
  uint64_t excluded_over_limit = 0; // entries longer than five tokens
};

DictionaryTerms terms_from_dictionary(const DomainDictionary& dict, DictionarySide side,
                                      bool fold_case = false);

struct CoverageReport {
  uint64_t ed_value = 0;
  std::string dictionary;
  std::string corpus;
  std::string testset;
  TermSet matched_terms;
  TermHistogram histogram{};
};

// matched = dict ∩ corpus ∩ test; ed_value = |matched|.
CoverageReport enhanced_domain_coverage(const TermSet& corpus_terms, const TermSet& dict_terms,
                                        const TermSet& test_terms);

struct CoverageGain {
  uint64_t gain = 0;
  TermSet new_terms; // gen.matched \ train.matched
  TermHistogram histogram{};
};

// Requires both reports to share dictionary and testset labels.
CoverageGain coverage_gain(const CoverageReport& gen_report, const CoverageReport& train_report);

struct TermDiff {
  std::string a_label;
  std::string b_label;
  TermSet a_minus_b;
  TermSet b_minus_a;
  TermSet intersection;
  TermHistogram a_minus_b_histogram{};
  TermHistogram b_minus_a_histogram{};
  TermHistogram intersection_histogram{};
};

TermDiff term_diff(const CoverageReport& report_a, const CoverageReport& report_b);

enum class ReportFormat { Json, Csv };

// JSON carries the full structure; CSV writes `n,count` rows for nonzero bins
// plus a companion .terms.txt listing. Both orderings are canonical (sorted).
void emit_report(const CoverageReport& report, const std::filesystem::path& path,
                 ReportFormat format);
void emit_report(const TermDiff& diff, const std::filesystem::path& path, ReportFormat format);
void emit_report(const CoverageGain& gain, const std::filesystem::path& path,
                 ReportFormat format);

CoverageReport read_report_json(const std::filesystem::path& path);

} // namespace dictaug
