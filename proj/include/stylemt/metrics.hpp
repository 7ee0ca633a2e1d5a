#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylemt/corpus.hpp"
#include "stylemt/errors.hpp"

namespace stylemt {

enum class BleuSmoothing { None, AddOne };

struct BleuConfig {
  int max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::None;
  bool case_sensitive = false;
};

// Clipped matches and hypothesis n-gram total for one hypothesis/reference
// pair; the building block of the modified precision.
struct NgramCounts {
  std::size_t matches = 0;
  std::size_t total = 0;
};

NgramCounts modified_precision_counts(const TokenSeq& hyp, const TokenSeq& ref,
                                      int n, bool case_sensitive = false);

// Corpus-level BLEU in [0, 100]: BP * exp(sum_{n<=max_n} ln(p_n) / max_n)
// with clipped modified precisions pooled over the corpus and
// BP = min(1, e^{1 - r/c}). Returns 0 when any pooled p_n is 0 under
// smoothing None. Throws LengthMismatch when |hyps| != |refs|.
double bleu_corpus(const std::vector<TokenSeq>& hyps,
                   const std::vector<TokenSeq>& refs,
                   const BleuConfig& cfg = {});

// Sentence-level BLEU; callers normally pass AddOne smoothing since the
// unsmoothed score is degenerate on single sentences.
double bleu_sentence(const TokenSeq& hyp, const TokenSeq& ref,
                     const BleuConfig& cfg);

// Fraction of the translation's n-grams found anywhere in the retrieved
// set. Type-level (distinct n-grams) by default; token-level counting
// weights each occurrence. 0 when the translation has no n-grams of
// length n.
double ngram_match_rate(const TokenSeq& translation,
                        const std::vector<TokenSeq>& retrieved, int n,
                        bool token_level = false);

// Arithmetic mean of per-item match rates over aligned lists.
double avg_ngram_match(const std::vector<TokenSeq>& translations,
                       const std::vector<std::vector<TokenSeq>>& retrieved,
                       int n, bool token_level = false);

// (style - zero) / (few - zero); DivisionByZero when few == zero.
double gap_closure(double zero, double style, double few);

// 100 * (tier_avg - tier0_avg) / tier0_avg. DivisionByZero when
// tier0_avg == 0.
double tier_delta(double tier0_avg, double tier_avg);

// Integer-precision rendering used in the tier tables: round half away
// from zero, explicit sign except at zero ("-14%", "+9%", "0%").
std::string format_signed_percent(double percent);

// "38.4 (-14%)" table cells.
std::string format_tier_cell(double avg, double delta_percent);

// --- external scorer bridge ----------------------------------------------

struct ScoringItem {
  int id;
  std::string src;
  std::string mt;
  std::string ref;
};

void export_for_scoring(const std::vector<ScoringItem>& items,
                        const std::string& path);

// {"id": int, "score": float} per line; ids must bijectively match
// `expected_ids`, otherwise IdMismatch.
std::map<int, double> import_scores(const std::string& path,
                                    const std::vector<int>& expected_ids);

// --- report tables --------------------------------------------------------

// Per-method rows keyed by domain column, plus an arithmetic-mean Average
// column, rendered in the experiment tables' layout.
struct MetricReport {
  std::vector<std::string> domains;                       // column order
  std::map<std::string, std::map<std::string, double>> bleu;      // method -> domain -> score
  std::map<std::string, std::map<std::string, double>> external;  // e.g. COMET

  double average(const std::string& method) const;
};

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows);

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

std::string format_score(double value);  // one decimal, matches the tables

}  // namespace stylemt
