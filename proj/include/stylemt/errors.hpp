#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stylemt {

// Base class for everything the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Line- or record-level format violation. Line numbers are 0-based,
// matching sentence ids.
class FormatError : public Error {
 public:
  FormatError(std::size_t line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t src_count, std::size_t tgt_count)
      : Error("parallel corpora differ in length: " +
              std::to_string(src_count) + " vs " + std::to_string(tgt_count)),
        src_count_(src_count),
        tgt_count_(tgt_count) {}
  std::size_t src_count() const { return src_count_; }
  std::size_t tgt_count() const { return tgt_count_; }

 private:
  std::size_t src_count_;
  std::size_t tgt_count_;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

class UnknownDoc : public Error {
 public:
  explicit UnknownDoc(int doc_id)
      : Error("unknown document id " + std::to_string(doc_id)),
        doc_id_(doc_id) {}
  int doc_id() const { return doc_id_; }

 private:
  int doc_id_;
};

class DimMismatch : public Error {
 public:
  DimMismatch(std::size_t expected, std::size_t got)
      : Error("vector dimension mismatch: expected " +
              std::to_string(expected) + ", got " + std::to_string(got)) {}
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class EmptyDemos : public Error {
 public:
  EmptyDemos() : Error("demonstration list is empty") {}
};

// Positioned parse failure for tree formats. For bracketed trees the
// position is a byte offset, for CoNLL-U it is a 0-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("aligned lists differ in length: " + std::to_string(a) +
              " vs " + std::to_string(b)) {}
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class IdMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptRecord : public Error {
 public:
  CorruptRecord(std::size_t line_no, const std::string& what)
      : Error("record line " + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stylemt
