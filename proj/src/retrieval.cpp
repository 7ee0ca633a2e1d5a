#include "stylemt/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace stylemt {

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = char(v >> (8 * i));
  out.write(buf, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = char(v >> (8 * i));
  out.write(buf, 8);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

constexpr char kIndexMagic[4] = {'S', 'M', 'I', 'X'};

// Distinct query tokens in first-occurrence order. Both the index path and
// the naive oracle in tests accumulate term contributions in this order, so
// scores agree bit-for-bit.
std::vector<const std::string*> distinct_terms(const TokenSeq& query) {
  std::vector<const std::string*> terms;
  std::unordered_set<std::string_view> seen;
  for (const std::string& t : query.tokens) {
    if (seen.insert(t).second) terms.push_back(&t);
  }
  return terms;
}

double idf(int doc_count, int doc_freq) {
  return std::log(1.0 + (double(doc_count) - double(doc_freq) + 0.5) /
                            (double(doc_freq) + 0.5));
}

double term_contribution(double idf_value, int tf, int doc_len,
                         double avg_len, const Bm25Params& p) {
  double norm = p.k1 * (1.0 - p.b + p.b * double(doc_len) / avg_len);
  return idf_value * double(tf) * (p.k1 + 1.0) / (double(tf) + norm);
}

void sort_hits(std::vector<RetrievalHit>& hits) {
  std::sort(hits.begin(), hits.end(),
            [](const RetrievalHit& a, const RetrievalHit& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
}

}  // namespace

void Bm25Params::validate() const {
  if (!(k1 > 0.0)) throw ConfigError("bm25: k1 must be > 0");
  if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("bm25: b must be in [0,1]");
}

const std::vector<Posting>* InvertedIndex::postings(
    const std::string& token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? nullptr : &it->second;
}

int InvertedIndex::doc_length(int doc_id) const {
  if (!has_doc(doc_id)) throw UnknownDoc(doc_id);
  return doc_lengths_[std::size_t(doc_id)];
}

InvertedIndex build_index(const Corpus& corpus,
                          const TokenizerConfig& config) {
  if (corpus.empty()) throw EmptyCorpus();

  InvertedIndex index;
  index.tokenizer_config_ = config;
  index.corpus_hash_ = corpus.content_hash();
  index.doc_lengths_.reserve(corpus.size());

  std::size_t total_len = 0;
  for (const Sentence& s : corpus.sentences()) {
    TokenSeq seq = tokenize(s.text, config, s.id);
    index.doc_lengths_.push_back(int(seq.tokens.size()));
    total_len += seq.tokens.size();

    std::map<std::string, int> tf;  // ordered for deterministic layout
    for (const std::string& t : seq.tokens) ++tf[t];
    for (const auto& [token, count] : tf) {
      index.postings_[token].push_back({s.id, count});
    }
  }
  // Documents arrive in ascending id order, so postings lists are sorted.
  index.avg_doc_length_ = double(total_len) / double(corpus.size());
  return index;
}

double bm25_score(const InvertedIndex& index, const TokenSeq& query,
                  int doc_id, const Bm25Params& params) {
  params.validate();
  if (!index.has_doc(doc_id)) throw UnknownDoc(doc_id);

  double score = 0.0;
  int doc_len = index.doc_length(doc_id);
  for (const std::string* term : distinct_terms(query)) {
    const std::vector<Posting>* list = index.postings(*term);
    if (!list) continue;
    auto it = std::lower_bound(
        list->begin(), list->end(), doc_id,
        [](const Posting& p, int id) { return p.doc_id < id; });
    if (it == list->end() || it->doc_id != doc_id) continue;
    double w = idf(index.doc_count(), int(list->size()));
    score += term_contribution(w, it->term_freq, doc_len,
                               index.avg_doc_length(), params);
  }
  return score;
}

std::vector<RetrievalHit> retrieve(const InvertedIndex& index,
                                   const TokenSeq& query, int k,
                                   const Bm25Params& params) {
  params.validate();
  if (k < 1) throw ConfigError("retrieve: k must be >= 1");

  // Candidate docs in ascending id order, scored term by term so the
  // accumulation order matches bm25_score and the full-scan oracle.
  std::map<int, double> scores;
  for (const std::string* term : distinct_terms(query)) {
    const std::vector<Posting>* list = index.postings(*term);
    if (!list) continue;
    double w = idf(index.doc_count(), int(list->size()));
    for (const Posting& p : *list) {
      scores[p.doc_id] += term_contribution(
          w, p.term_freq, index.doc_length(p.doc_id), index.avg_doc_length(),
          params);
    }
  }

  std::vector<RetrievalHit> hits;
  hits.reserve(scores.size());
  for (const auto& [doc_id, score] : scores) {
    if (score > 0.0) hits.push_back({doc_id, score, 0, std::nullopt});
  }
  sort_hits(hits);
  if (int(hits.size()) > k) hits.resize(std::size_t(k));
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = int(i);
  return hits;
}

std::array<std::vector<RetrievalHit>, 4> partition_tiers(
    const std::vector<RetrievalHit>& hits) {
  std::array<std::vector<RetrievalHit>, 4> tiers;
  for (std::size_t i = 0; i < hits.size() && i < 100; ++i) {
    RetrievalHit hit = hits[i];
    hit.tier = int(i / 25);
    tiers[i / 25].push_back(hit);
  }
  return tiers;
}

EmbeddingTable EmbeddingTable::from_vectors(
    std::vector<std::pair<int, std::vector<double>>> rows) {
  EmbeddingTable table;
  if (rows.empty()) return table;
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  table.dim_ = rows.front().second.size();
  for (auto& [id, vec] : rows) {
    if (vec.size() != table.dim_) throw DimMismatch(table.dim_, vec.size());
    double norm = 0.0;
    for (double v : vec) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw FormatError(std::size_t(id), "zero embedding vector");
    }
    for (double& v : vec) v /= norm;
  }
  table.vectors_ = std::move(rows);
  return table;
}

EmbeddingTable EmbeddingTable::load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  std::vector<std::pair<int, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++line_no;
      continue;
    }
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.contains("id") || !obj.contains("vec")) {
      throw FormatError(line_no, "expected {\"id\": int, \"vec\": [...]}");
    }
    rows.emplace_back(obj["id"].get<int>(),
                      obj["vec"].get<std::vector<double>>());
    ++line_no;
  }
  return from_vectors(std::move(rows));
}

const std::vector<double>* EmbeddingTable::vector_for(int doc_id) const {
  auto it = std::lower_bound(
      vectors_.begin(), vectors_.end(), doc_id,
      [](const auto& row, int id) { return row.first < id; });
  if (it == vectors_.end() || it->first != doc_id) return nullptr;
  return &it->second;
}

std::vector<RetrievalHit> dense_retrieve(const EmbeddingTable& table,
                                         const std::vector<double>& query_vec,
                                         int k) {
  if (k < 1) throw ConfigError("dense_retrieve: k must be >= 1");
  if (query_vec.size() != table.dim()) {
    throw DimMismatch(table.dim(), query_vec.size());
  }

  double norm = 0.0;
  for (double v : query_vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) return {};
  std::vector<double> unit(query_vec);
  for (double& v : unit) v /= norm;

  std::vector<RetrievalHit> hits;
  for (const auto& [doc_id, vec] : table.rows()) {
    double dot = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i) dot += unit[i] * vec[i];
    if (dot > 0.0) hits.push_back({doc_id, dot, 0, std::nullopt});
  }
  sort_hits(hits);
  if (int(hits.size()) > k) hits.resize(std::size_t(k));
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = int(i);
  return hits;
}

void InvertedIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");

  out.write(kIndexMagic, 4);
  write_u32(out, kCacheVersion);
  write_u32(out, std::uint32_t(corpus_hash_.size()));
  out.write(corpus_hash_.data(), std::streamsize(corpus_hash_.size()));
  out.put(tokenizer_config_.lowercase ? 1 : 0);
  out.put(tokenizer_config_.split_punct ? 1 : 0);

  write_u64(out, doc_lengths_.size());
  for (int len : doc_lengths_) write_u32(out, std::uint32_t(len));

  std::vector<const std::string*> tokens;
  tokens.reserve(postings_.size());
  for (const auto& [token, list] : postings_) tokens.push_back(&token);
  std::sort(tokens.begin(), tokens.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  write_u64(out, tokens.size());
  for (const std::string* token : tokens) {
    write_u32(out, std::uint32_t(token->size()));
    out.write(token->data(), std::streamsize(token->size()));
    const auto& list = postings_.at(*token);
    write_u64(out, list.size());
    for (const Posting& p : list) {
      write_u32(out, std::uint32_t(p.doc_id));
      write_u32(out, std::uint32_t(p.term_freq));
    }
  }
  if (!out) throw IoError(path, "write failure");
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kIndexMagic, 4) != 0) {
    throw FormatError(0, "not an index cache file");
  }
  std::uint32_t version = read_u32(in);
  if (version != kCacheVersion) {
    throw FormatError(0, "unsupported index cache version " +
                             std::to_string(version));
  }

  InvertedIndex index;
  std::uint32_t hash_len = read_u32(in);
  index.corpus_hash_.resize(hash_len);
  in.read(index.corpus_hash_.data(), hash_len);
  index.tokenizer_config_.lowercase = in.get() != 0;
  index.tokenizer_config_.split_punct = in.get() != 0;

  std::uint64_t doc_count = read_u64(in);
  index.doc_lengths_.reserve(doc_count);
  std::size_t total_len = 0;
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    int len = int(read_u32(in));
    index.doc_lengths_.push_back(len);
    total_len += std::size_t(len);
  }
  index.avg_doc_length_ =
      doc_count == 0 ? 0.0 : double(total_len) / double(doc_count);

  std::uint64_t vocab = read_u64(in);
  for (std::uint64_t i = 0; i < vocab; ++i) {
    std::uint32_t token_len = read_u32(in);
    std::string token(token_len, '\0');
    in.read(token.data(), token_len);
    std::uint64_t postings_len = read_u64(in);
    std::vector<Posting> list;
    list.reserve(postings_len);
    for (std::uint64_t j = 0; j < postings_len; ++j) {
      int doc_id = int(read_u32(in));
      int tf = int(read_u32(in));
      list.push_back({doc_id, tf});
    }
    index.postings_.emplace(std::move(token), std::move(list));
  }
  if (!in) throw FormatError(0, "truncated index cache file");
  return index;
}

}  // namespace stylemt
