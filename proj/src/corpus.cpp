#include "stylemt/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "stylemt/sha256.hpp"

namespace stylemt {

namespace {

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Decodes one UTF-8 codepoint starting at s[i]; returns its length in
// bytes and writes the codepoint, or returns 0 on malformed input.
std::size_t decode_utf8(const std::string& s, std::size_t i, char32_t& cp) {
  unsigned char c = s[i];
  std::size_t len;
  if (c < 0x80) {
    cp = c;
    return 1;
  } else if ((c & 0xe0) == 0xc0) {
    len = 2;
    cp = c & 0x1f;
  } else if ((c & 0xf0) == 0xe0) {
    len = 3;
    cp = c & 0x0f;
  } else if ((c & 0xf8) == 0xf0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char cc = s[i + k];
    if ((cc & 0xc0) != 0x80) return 0;
    cp = (cp << 6) | (cc & 0x3f);
  }
  // Reject overlong encodings and surrogates.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || (cp >= 0xd800 && cp <= 0xdfff) ||
      cp > 0x10ffff) {
    return 0;
  }
  return len;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xc0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xe0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(char(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(char(0xf0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(char(0x80 | (cp & 0x3f)));
  }
}

char32_t lower_codepoint(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 supplement: À..Þ -> à..þ, except ×.
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 32;
  // Latin Extended-A is mostly case-paired even/odd (covers ĀāĆć... Şş).
  if (cp >= 0x100 && cp <= 0x177 && (cp % 2 == 0)) return cp + 1;
  if (cp == 0x178) return 0xff;  // Ÿ -> ÿ
  if (cp >= 0x179 && cp <= 0x17d && (cp % 2 == 1)) return cp + 1;
  return cp;
}

bool is_space_codepoint(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
         cp == 0xa0 || (cp >= 0x2000 && cp <= 0x200a) || cp == 0x3000;
}

bool is_punct_codepoint(char32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<unsigned char>(cp)) != 0;
  }
  // Common non-ASCII punctuation: Latin-1 marks, general punctuation block,
  // CJK brackets and fullwidth forms.
  if (cp == 0xa1 || cp == 0xa7 || cp == 0xab || cp == 0xb6 || cp == 0xb7 ||
      cp == 0xbb || cp == 0xbf) {
    return true;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;   // dashes, quotes, daggers
  if (cp >= 0x2030 && cp <= 0x205e) return true;   // permille, primes, etc.
  if (cp >= 0x3001 && cp <= 0x3011) return true;
  if (cp >= 0xff01 && cp <= 0xff0f) return true;
  return false;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Domain Domain::from_name(const std::string& name) {
  std::string n = ascii_lower(name);
  if (n == "law") return law();
  if (n == "medical" || n == "med") return medical();
  if (n == "koran") return koran();
  return other(n);
}

const Sentence& Corpus::at(int id) const {
  if (id < 0 || std::size_t(id) >= sentences_.size()) {
    throw UnknownDoc(id);
  }
  return sentences_[std::size_t(id)];
}

std::string Corpus::content_hash() const {
  Sha256 h;
  for (const Sentence& s : sentences_) {
    h.update(s.text);
    h.update("\n", 1);
  }
  return to_hex(h.digest());
}

ParallelCorpus::ParallelCorpus(Corpus src, Corpus tgt)
    : src_(std::move(src)), tgt_(std::move(tgt)) {
  if (src_.size() != tgt_.size()) {
    throw AlignmentError(src_.size(), tgt_.size());
  }
}

bool is_valid_utf8(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp;
    std::size_t len = decode_utf8(s, i, cp);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

Corpus load_monolingual(const std::string& path, const Domain& domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  std::vector<Sentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_valid_utf8(line)) throw FormatError(line_no, "invalid UTF-8");
    if (trim(line).empty()) throw FormatError(line_no, "blank line");
    sentences.push_back({int(line_no), line, domain});
    ++line_no;
  }
  if (in.bad()) throw IoError(path, "read failure");
  return Corpus(std::move(sentences), domain);
}

ParallelCorpus load_parallel(const std::string& src_path,
                             const std::string& tgt_path,
                             const Domain& domain) {
  Corpus src = load_monolingual(src_path, domain);
  Corpus tgt = load_monolingual(tgt_path, domain);
  return ParallelCorpus(std::move(src), std::move(tgt));
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  for (const Sentence& s : corpus.sentences()) {
    out << s.text << '\n';
  }
  if (!out) throw IoError(path, "write failure");
}

std::string lowercase_utf8(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp;
    std::size_t len = decode_utf8(s, i, cp);
    if (len == 0) {  // pass malformed bytes through untouched
      out.push_back(s[i]);
      ++i;
      continue;
    }
    encode_utf8(lower_codepoint(cp), out);
    i += len;
  }
  return out;
}

TokenSeq tokenize(const std::string& text, const TokenizerConfig& config,
                  int source_id) {
  TokenSeq seq;
  seq.source_id = source_id;

  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      seq.tokens.push_back(current);
      current.clear();
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp;
    std::size_t len = decode_utf8(text, i, cp);
    if (len == 0) {  // treat a stray byte as an opaque character
      current.push_back(text[i]);
      ++i;
      continue;
    }
    if (is_space_codepoint(cp)) {
      flush();
    } else if (config.split_punct && is_punct_codepoint(cp)) {
      flush();
      std::string punct;
      encode_utf8(cp, punct);
      seq.tokens.push_back(punct);
    } else {
      encode_utf8(config.lowercase ? lower_codepoint(cp) : cp, current);
    }
    i += len;
  }
  flush();
  return seq;
}

std::vector<TokenSeq> tokenize_corpus(const Corpus& corpus,
                                      const TokenizerConfig& config) {
  std::vector<TokenSeq> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences()) {
    out.push_back(tokenize(s.text, config, s.id));
  }
  return out;
}

CorpusStats stats(const Corpus& corpus) {
  CorpusStats result;
  result.sentence_count = corpus.size();
  if (corpus.empty()) return result;

  std::size_t total_words = 0;
  for (const Sentence& s : corpus.sentences()) {
    std::istringstream iss(s.text);
    std::string word;
    while (iss >> word) ++total_words;
  }
  result.mean_words_per_sentence =
      double(total_words) / double(result.sentence_count);
  return result;
}

}  // namespace stylemt
