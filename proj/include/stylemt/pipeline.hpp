#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylemt/corpus.hpp"
#include "stylemt/errors.hpp"
#include "stylemt/llm.hpp"
#include "stylemt/metrics.hpp"
#include "stylemt/prompting.hpp"
#include "stylemt/retrieval.hpp"

namespace stylemt {

// One translation event. Canonical serialization is sorted-key JSON with
// no timing fields, so identical inputs give byte-identical record files.
struct TranslationRecord {
  int test_id = 0;
  std::string source;
  PromptMode mode;
  std::vector<int> demo_ids;          // empty for zero-shot
  std::optional<std::string> draft;   // Style mode only
  std::string hypothesis;
  ModelParams params;
  std::string backend_id;
  std::string cache_key;
  bool fallback_zero_shot = false;    // retrieval came back empty
  std::optional<std::string> error;   // set when the backend failed

  nlohmann::json to_json() const;
  static TranslationRecord from_json(const nlohmann::json& j);

  // Mode/demo/draft consistency; skipped for errored records, which are
  // incomplete by nature.
  void validate() const;
};

// cache_key per the record contract: a deterministic function of
// (test_id, mode, k, demo_ids, template hash, model params, backend id).
std::string make_cache_key(int test_id, const PromptMode& mode,
                           const std::vector<int>& demo_ids,
                           const std::string& template_hash,
                           const ModelParams& params,
                           const std::string& backend_id);

// Resume lookups drop demo_ids/draft (style-mode demo ids are only known
// after the draft call, which resuming is meant to avoid).
std::string make_resume_key(int test_id, const PromptMode& mode,
                            const std::string& template_hash,
                            const ModelParams& params,
                            const std::string& backend_id);

std::vector<TranslationRecord> load_records(const std::string& path);
void write_records(const std::vector<TranslationRecord>& records,
                   const std::string& path);

// Append-safe JSONL store with a warm-cache lookup, used for resumable
// runs. Appends go through one serialized writer.
class RecordStore {
 public:
  explicit RecordStore(std::string path);

  const TranslationRecord* cached(const std::string& resume_key) const;
  void append(const TranslationRecord& record);
  std::size_t size() const { return records_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<TranslationRecord> records_;
  std::unordered_map<std::string, std::size_t> by_resume_key_;
  std::mutex write_mutex_;
};

// Retrieval strategy for demonstration selection. Queries carry the test
// id in TokenSeq::source_id; the dense path uses it to look up the
// precomputed query embedding.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual std::vector<RetrievalHit> query(const TokenSeq& query,
                                          int k) const = 0;
  virtual std::string id() const = 0;
};

class Bm25Retriever : public Retriever {
 public:
  Bm25Retriever(const InvertedIndex& index, Bm25Params params = {})
      : index_(index), params_(params) {}
  std::vector<RetrievalHit> query(const TokenSeq& q, int k) const override {
    return retrieve(index_, q, k, params_);
  }
  std::string id() const override { return "bm25"; }
  const InvertedIndex& index() const { return index_; }

 private:
  const InvertedIndex& index_;
  Bm25Params params_;
};

// Dense retrieval over ingested embeddings: document vectors for the
// demonstration corpus plus query vectors keyed by test id (drafts are
// embedded externally through the same file bridge).
class DenseRetriever : public Retriever {
 public:
  DenseRetriever(const EmbeddingTable& docs, const EmbeddingTable& queries)
      : docs_(docs), queries_(queries) {}
  std::vector<RetrievalHit> query(const TokenSeq& q, int k) const override;
  std::string id() const override { return "dense"; }

 private:
  const EmbeddingTable& docs_;
  const EmbeddingTable& queries_;
};

struct RunOptions {
  int workers = 1;                 // in-flight bound for backend calls
  RecordStore* store = nullptr;    // optional persistence + warm cache
  std::optional<int> tier;         // restrict demos to one top-100 tier
};

// One record per test item; failures are recorded, never fatal.
std::vector<TranslationRecord> translate_zero_shot(
    const Corpus& testset, Backend& backend, const ModelParams& params,
    const PromptTemplate& tpl, const LanguagePair& langs,
    const RunOptions& opts = {});

// Retrieves top-k parallel demonstrations per item (source side as query),
// most similar first. Empty retrieval falls back to a zero-shot prompt and
// flags the record.
std::vector<TranslationRecord> translate_few_shot(
    const Corpus& testset, const ParallelCorpus& train,
    const Retriever& retriever, int k, Backend& backend,
    const ModelParams& params, const PromptTemplate& tpl,
    const LanguagePair& langs, const RunOptions& opts = {});

// Two-pass style learning: zero-shot draft, then the draft queries the
// target-language corpus and the styled prompt carries the retrieved
// target sentences. Empty retrieval keeps the draft and flags the record.
std::vector<TranslationRecord> translate_style(
    const Corpus& testset, const Corpus& target_mono,
    const Retriever& retriever, int k, Backend& backend,
    const ModelParams& params, const PromptTemplate& tpl,
    const LanguagePair& langs, const RunOptions& opts = {});

// --- devset-driven test cleaning -------------------------------------------

struct CleaningConfig {
  std::string preamble;
  std::string question;
  std::vector<std::string> criteria;  // paired with exemplars round-robin
  int exemplar_count = 20;

  static CleaningConfig defaults();
  static CleaningConfig load(const std::string& path);
  void save(const std::string& path) const;
};

struct CleaningVerdict {
  enum class Decision { Keep, Drop };
  int pair_id = 0;
  Decision decision = Decision::Keep;
  std::string raw_reply;
  bool flagged = false;  // unparseable reply or backend failure

  nlohmann::json to_json() const;
};

struct CleaningOutcome {
  std::vector<ParallelPair> kept;
  std::vector<CleaningVerdict> verdicts;   // one per test pair, in order
  std::vector<int> exemplar_ids;           // dev pair ids, worst first
  std::string filter_prompt;               // shared prefix of every query
};

// Ranks dev pairs by sentence BLEU of their zero-shot translations,
// embeds the worst `exemplar_count` original pairs with criteria text into
// the filter prompt, then asks the backend per test pair. Keep iff the
// reply leads with "yes" (case-insensitive); unparseable replies and
// backend errors keep the pair and flag the verdict.
CleaningOutcome clean_testset(const ParallelCorpus& devset,
                              const ParallelCorpus& testset, Backend& backend,
                              const ModelParams& params,
                              const PromptTemplate& tpl,
                              const LanguagePair& langs,
                              const CleaningConfig& cfg,
                              const RunOptions& opts = {});

// Run provenance, written alongside each run's records.
void write_manifest(const nlohmann::json& manifest, const std::string& path);

// Bounded-worker loop preserving input order; fn(i) must handle its own
// per-item failures.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace stylemt
