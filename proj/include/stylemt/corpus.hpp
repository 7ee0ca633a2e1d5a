#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stylemt/errors.hpp"

namespace stylemt {

// Corpus domain tag. The three named domains are the cleaned splits the
// experiments run on; anything else travels as Other with a free-form name.
class Domain {
 public:
  enum class Kind { Law, Medical, Koran, Other };

  Domain() : kind_(Kind::Other), name_("other") {}

  static Domain law() { return Domain(Kind::Law, "law"); }
  static Domain medical() { return Domain(Kind::Medical, "medical"); }
  static Domain koran() { return Domain(Kind::Koran, "koran"); }
  static Domain other(std::string name) {
    return Domain(Kind::Other, std::move(name));
  }
  // Accepts "law", "medical", "koran" (case-insensitive); anything else
  // becomes Other with that name.
  static Domain from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_;
  }

 private:
  Domain(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

struct Sentence {
  int id = 0;           // 0-based line number of origin, unique per corpus
  std::string text;     // non-empty after trimming, no interior newlines
  Domain domain;
};

struct TokenizerConfig {
  bool lowercase = true;
  bool split_punct = true;

  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

// Normalized token sequence; the unit of retrieval queries, n-gram
// analysis and BLEU.
struct TokenSeq {
  std::vector<std::string> tokens;
  int source_id = -1;
};

struct ParallelPair {
  Sentence src;
  Sentence tgt;  // invariant: src.id == tgt.id
};

struct CorpusStats {
  std::size_t sentence_count = 0;
  double mean_words_per_sentence = 0.0;  // whitespace words, not tokenizer tokens
};

class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Sentence> sentences, Domain domain)
      : sentences_(std::move(sentences)), domain_(std::move(domain)) {}

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Sentence& at(int id) const;
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const Domain& domain() const { return domain_; }

  // Fingerprint over the raw sentence text, for index caches and manifests.
  std::string content_hash() const;

 private:
  std::vector<Sentence> sentences_;
  Domain domain_;
};

class ParallelCorpus {
 public:
  ParallelCorpus() = default;
  ParallelCorpus(Corpus src, Corpus tgt);  // throws AlignmentError

  const Corpus& src() const { return src_; }
  const Corpus& tgt() const { return tgt_; }
  std::size_t size() const { return src_.size(); }
  ParallelPair pair(int id) const { return {src_.at(id), tgt_.at(id)}; }

  ParallelCorpus swapped() const { return ParallelCorpus(tgt_, src_); }

 private:
  Corpus src_;
  Corpus tgt_;
};

// One sentence per line, UTF-8, ids = line numbers. Blank or non-UTF-8
// lines raise FormatError with the offending line number.
Corpus load_monolingual(const std::string& path, const Domain& domain);

// Two line-aligned files; AlignmentError when the line counts differ.
ParallelCorpus load_parallel(const std::string& src_path,
                             const std::string& tgt_path,
                             const Domain& domain);

void write_corpus(const Corpus& corpus, const std::string& path);

// Lowercases (ASCII + Latin-1 letters) and splits punctuation into
// standalone tokens, per config. Total on valid strings; "" yields no
// tokens.
TokenSeq tokenize(const std::string& text, const TokenizerConfig& config,
                  int source_id = -1);

std::vector<TokenSeq> tokenize_corpus(const Corpus& corpus,
                                      const TokenizerConfig& config);

// Words/sentence by raw whitespace splitting, matching how dataset
// statistics tables count words.
CorpusStats stats(const Corpus& corpus);

// Shared lowercase normalization (ASCII + Latin-1 range), exposed so BLEU's
// case-insensitive mode agrees with the tokenizer.
std::string lowercase_utf8(const std::string& s);

bool is_valid_utf8(const std::string& s);

}  // namespace stylemt
