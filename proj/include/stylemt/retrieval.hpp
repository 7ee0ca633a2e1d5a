#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stylemt/corpus.hpp"
#include "stylemt/errors.hpp"

namespace stylemt {

struct Bm25Params {
  double k1 = 1.2;   // term-frequency saturation, > 0
  double b = 0.75;   // length normalization, in [0, 1]

  void validate() const;
};

struct RetrievalHit {
  int doc_id = 0;
  double score = 0.0;        // >= 0
  int rank = 0;              // 0-based, strictly increasing per result list
  std::optional<int> tier;   // 0..3 once partitioned
};

struct Posting {
  int doc_id;
  int term_freq;
};

// Okapi BM25 over an inverted index. Built once from a corpus, immutable
// afterwards; concurrent queries are safe.
class InvertedIndex {
 public:
  static constexpr std::uint32_t kCacheVersion = 1;

  const std::vector<Posting>* postings(const std::string& token) const;
  int doc_length(int doc_id) const;
  double avg_doc_length() const { return avg_doc_length_; }
  int doc_count() const { return int(doc_lengths_.size()); }
  bool has_doc(int doc_id) const {
    return doc_id >= 0 && std::size_t(doc_id) < doc_lengths_.size();
  }
  const std::string& corpus_hash() const { return corpus_hash_; }
  const TokenizerConfig& tokenizer_config() const { return tokenizer_config_; }

  // Versioned binary cache keyed by corpus content hash.
  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);

  friend InvertedIndex build_index(const Corpus& corpus,
                                   const TokenizerConfig& config);

 private:
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<int> doc_lengths_;  // doc id -> token count
  double avg_doc_length_ = 0.0;
  std::string corpus_hash_;
  TokenizerConfig tokenizer_config_;
};

// Throws EmptyCorpus on an empty corpus.
InvertedIndex build_index(const Corpus& corpus, const TokenizerConfig& config);

// Okapi score of one document for the query. Duplicate query terms count
// once (the sum runs over distinct terms in first-occurrence order).
// IDF(t) = ln(1 + (N - df + 0.5) / (df + 0.5)), never negative.
double bm25_score(const InvertedIndex& index, const TokenSeq& query,
                  int doc_id, const Bm25Params& params = {});

// Top-k hits by score; only documents with positive score are returned.
// Ties break by ascending doc id. A query with no indexed terms yields an
// empty list.
std::vector<RetrievalHit> retrieve(const InvertedIndex& index,
                                   const TokenSeq& query, int k,
                                   const Bm25Params& params = {});

// Splits a top-100 (or shorter) hit list into four rank bands of 25,
// stamping the tier field. Trailing tiers may be short or empty.
std::array<std::vector<RetrievalHit>, 4> partition_tiers(
    const std::vector<RetrievalHit>& hits);

// Precomputed sentence embeddings, unit-normalized on load.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // JSONL, one {"id": int, "vec": [float, ...]} per line.
  static EmbeddingTable load_jsonl(const std::string& path);
  static EmbeddingTable from_vectors(
      std::vector<std::pair<int, std::vector<double>>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* vector_for(int doc_id) const;
  const std::vector<std::pair<int, std::vector<double>>>& rows() const {
    return vectors_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::pair<int, std::vector<double>>> vectors_;  // sorted by id
};

// Top-k by cosine similarity (dot product after unit normalization), same
// tie-break rule as the BM25 path. Documents with non-positive cosine are
// not returned. Throws DimMismatch when the query length differs.
std::vector<RetrievalHit> dense_retrieve(const EmbeddingTable& table,
                                         const std::vector<double>& query_vec,
                                         int k);

}  // namespace stylemt
