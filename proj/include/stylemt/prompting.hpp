#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylemt/corpus.hpp"
#include "stylemt/errors.hpp"

namespace stylemt {

enum class Role { System, User, Assistant };

std::string role_name(Role role);  // lowercase wire string

struct Message {
  Role role;
  std::string content;  // non-empty

  friend bool operator==(const Message&, const Message&) = default;
};

struct PromptMode {
  enum class Kind { ZeroShot, FewShot, Style };

  Kind kind = Kind::ZeroShot;
  int k = 0;  // demonstration count; 0 for zero-shot

  static PromptMode zero_shot() { return {Kind::ZeroShot, 0}; }
  static PromptMode few_shot(int k) { return {Kind::FewShot, k}; }
  static PromptMode style(int k) { return {Kind::Style, k}; }

  std::string name() const;                       // "zero-shot", "few-shot", "style"
  static PromptMode from_name(const std::string& name, int k);

  friend bool operator==(const PromptMode&, const PromptMode&) = default;
};

struct LanguagePair {
  std::string source = "German";
  std::string target = "English";
};

struct Prompt {
  std::vector<Message> messages;
  PromptMode mode;
  std::vector<int> demo_ids;  // corpus ids of the demonstrations used
};

// Template strings use {placeholder} markers ({{ escapes a literal brace).
// Placeholders: {source_lang} {target_lang} everywhere; {source} in `user`;
// {src} {tgt} in `demo_pair`; {text} in `style_sample`.
struct PromptTemplate {
  std::string system;
  std::string user;
  std::string demo_header;
  std::string demo_pair;
  std::string style_header;
  std::string style_sample;

  static PromptTemplate defaults();
  static PromptTemplate load(const std::string& path);  // JSON file
  void save(const std::string& path) const;

  nlohmann::json to_json() const;
  static PromptTemplate from_json(const nlohmann::json& j);

  // Stable fingerprint used in cache keys and manifests.
  std::string hash() const;

  // Throws TemplateError when a required placeholder is missing from the
  // template text (e.g. no {source} in `user`).
  void validate() const;
};

// Exactly one System and one User message; no demonstrations.
Prompt build_zero_shot(const Sentence& src, const LanguagePair& langs,
                       const PromptTemplate& tpl);

// Demonstrations rendered into a single Assistant message, one source line
// and one target line per pair, in the order given (callers pass them in
// descending retrieval score). The test source appears only in the final
// User message.
Prompt build_few_shot(const Sentence& src,
                      const std::vector<ParallelPair>& demos,
                      const LanguagePair& langs, const PromptTemplate& tpl);

// Style-learning prompt: the Assistant message carries k target-language
// sentences under the style instruction; no source-language demonstrations
// anywhere.
Prompt build_style(const Sentence& src,
                   const std::vector<Sentence>& target_samples,
                   const LanguagePair& langs, const PromptTemplate& tpl);

// Wire form: [{"role": "...", "content": "..."}, ...] in message order.
nlohmann::json render_wire(const Prompt& prompt);

// Canonical bytes of the wire form; input to the prompt hash.
std::string wire_canonical(const nlohmann::json& messages);
std::string prompt_hash(const nlohmann::json& messages);

}  // namespace stylemt
