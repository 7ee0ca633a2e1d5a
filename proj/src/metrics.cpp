#include "stylemt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace stylemt {

namespace {

// n-grams keyed by joining tokens with an unlikely separator byte.
constexpr char kSep = '\x1f';

std::string ngram_key(const std::vector<std::string>& tokens, std::size_t i,
                      int n, bool case_sensitive) {
  std::string key;
  for (int j = 0; j < n; ++j) {
    if (j > 0) key.push_back(kSep);
    key += case_sensitive ? tokens[i + j] : lowercase_utf8(tokens[i + j]);
  }
  return key;
}

std::unordered_map<std::string, std::size_t> ngram_counts(
    const TokenSeq& seq, int n, bool case_sensitive) {
  std::unordered_map<std::string, std::size_t> counts;
  if (int(seq.tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + std::size_t(n) <= seq.tokens.size(); ++i) {
    ++counts[ngram_key(seq.tokens, i, n, case_sensitive)];
  }
  return counts;
}

}  // namespace

NgramCounts modified_precision_counts(const TokenSeq& hyp, const TokenSeq& ref,
                                      int n, bool case_sensitive) {
  NgramCounts out;
  auto hyp_counts = ngram_counts(hyp, n, case_sensitive);
  auto ref_counts = ngram_counts(ref, n, case_sensitive);
  for (const auto& [gram, count] : hyp_counts) {
    out.total += count;
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) out.matches += std::min(count, it->second);
  }
  return out;
}

double bleu_corpus(const std::vector<TokenSeq>& hyps,
                   const std::vector<TokenSeq>& refs, const BleuConfig& cfg) {
  if (hyps.size() != refs.size()) {
    throw LengthMismatch(hyps.size(), refs.size());
  }
  if (hyps.empty()) throw LengthMismatch(0, 0);
  if (cfg.max_n < 1) throw ConfigError("bleu: max_n must be >= 1");

  std::vector<std::size_t> matches(std::size_t(cfg.max_n), 0);
  std::vector<std::size_t> totals(std::size_t(cfg.max_n), 0);
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  for (std::size_t i = 0; i < hyps.size(); ++i) {
    hyp_len += hyps[i].tokens.size();
    ref_len += refs[i].tokens.size();
    for (int n = 1; n <= cfg.max_n; ++n) {
      NgramCounts c =
          modified_precision_counts(hyps[i], refs[i], n, cfg.case_sensitive);
      matches[std::size_t(n - 1)] += c.matches;
      totals[std::size_t(n - 1)] += c.total;
    }
  }

  double log_precision = 0.0;
  for (int n = 1; n <= cfg.max_n; ++n) {
    double m = double(matches[std::size_t(n - 1)]);
    double t = double(totals[std::size_t(n - 1)]);
    if (cfg.smoothing == BleuSmoothing::AddOne && n > 1) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return 0.0;
    log_precision += std::log(m / t);
  }
  log_precision /= double(cfg.max_n);

  double bp = 1.0;
  if (hyp_len == 0) return 0.0;
  if (hyp_len < ref_len) {
    bp = std::exp(1.0 - double(ref_len) / double(hyp_len));
  }
  return 100.0 * bp * std::exp(log_precision);
}

double bleu_sentence(const TokenSeq& hyp, const TokenSeq& ref,
                     const BleuConfig& cfg) {
  return bleu_corpus({hyp}, {ref}, cfg);
}

double ngram_match_rate(const TokenSeq& translation,
                        const std::vector<TokenSeq>& retrieved, int n,
                        bool token_level) {
  if (n < 1) throw ConfigError("ngram_match_rate: n must be >= 1");

  std::unordered_set<std::string> pool;
  for (const TokenSeq& seq : retrieved) {
    for (const auto& [gram, count] : ngram_counts(seq, n, false)) {
      pool.insert(gram);
    }
  }

  auto trans = ngram_counts(translation, n, false);
  if (trans.empty()) return 0.0;

  if (token_level) {
    std::size_t total = 0;
    std::size_t matched = 0;
    for (const auto& [gram, count] : trans) {
      total += count;
      if (pool.count(gram)) matched += count;
    }
    return double(matched) / double(total);
  }
  std::size_t matched = 0;
  for (const auto& [gram, count] : trans) {
    if (pool.count(gram)) ++matched;
  }
  return double(matched) / double(trans.size());
}

double avg_ngram_match(const std::vector<TokenSeq>& translations,
                       const std::vector<std::vector<TokenSeq>>& retrieved,
                       int n, bool token_level) {
  if (translations.size() != retrieved.size()) {
    throw LengthMismatch(translations.size(), retrieved.size());
  }
  if (translations.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < translations.size(); ++i) {
    sum += ngram_match_rate(translations[i], retrieved[i], n, token_level);
  }
  return sum / double(translations.size());
}

double gap_closure(double zero, double style, double few) {
  if (few == zero) throw DivisionByZero("gap_closure: few == zero");
  return (style - zero) / (few - zero);
}

double tier_delta(double tier0_avg, double tier_avg) {
  if (tier0_avg == 0.0) throw DivisionByZero("tier_delta: tier0 average is 0");
  return 100.0 * (tier_avg - tier0_avg) / tier0_avg;
}

std::string format_signed_percent(double percent) {
  long rounded = std::lround(percent);
  if (rounded == 0) return "0%";
  std::string out = rounded > 0 ? "+" : "";
  out += std::to_string(rounded);
  out += '%';
  return out;
}

std::string format_tier_cell(double avg, double delta_percent) {
  return format_score(avg) + " (" + format_signed_percent(delta_percent) + ")";
}

std::string format_score(double value) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << value;
  return out.str();
}

void export_for_scoring(const std::vector<ScoringItem>& items,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  for (const ScoringItem& item : items) {
    nlohmann::json obj = {{"id", item.id},
                          {"src", item.src},
                          {"mt", item.mt},
                          {"ref", item.ref}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError(path, "write failure");
}

std::map<int, double> import_scores(const std::string& path,
                                    const std::vector<int>& expected_ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  std::map<int, double> scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++line_no;
      continue;
    }
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.contains("id") || !obj.contains("score")) {
      throw FormatError(line_no, "expected {\"id\": int, \"score\": float}");
    }
    int id = obj["id"].get<int>();
    if (!scores.emplace(id, obj["score"].get<double>()).second) {
      throw IdMismatch("duplicate score id " + std::to_string(id));
    }
    ++line_no;
  }

  std::set<int> expected(expected_ids.begin(), expected_ids.end());
  if (expected.size() != expected_ids.size()) {
    throw IdMismatch("duplicate expected id");
  }
  if (scores.size() != expected.size()) {
    throw IdMismatch("score file has " + std::to_string(scores.size()) +
                     " ids, expected " + std::to_string(expected.size()));
  }
  for (const auto& [id, score] : scores) {
    if (!expected.count(id)) {
      throw IdMismatch("unexpected score id " + std::to_string(id));
    }
  }
  return scores;
}

double MetricReport::average(const std::string& method) const {
  auto it = bleu.find(method);
  if (it == bleu.end() || it->second.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [domain, score] : it->second) sum += score;
  return sum / double(it->second.size());
}

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  out << '|';
  for (const std::string& h : header) out << ' ' << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& row : rows) {
    out << '|';
    for (const std::string& cell : row) out << ' ' << cell << " |";
    out << '\n';
  }
  return out.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += "\"\"";
      else quoted.push_back(c);
    }
    quoted += '"';
    return quoted;
  };
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << escape(header[i]);
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << escape(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stylemt
