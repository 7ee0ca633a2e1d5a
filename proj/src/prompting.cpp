#include "stylemt/prompting.hpp"

#include <fstream>
#include <map>

#include "stylemt/sha256.hpp"

namespace stylemt {

namespace {

// One-pass substitution over the template text only; binding values are
// inserted verbatim and never re-scanned.
std::string render(const std::string& tpl,
                   const std::map<std::string, std::string>& bindings) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    char c = tpl[i];
    if (c == '{') {
      if (i + 1 < tpl.size() && tpl[i + 1] == '{') {
        out.push_back('{');
        i += 2;
        continue;
      }
      std::size_t close = tpl.find('}', i + 1);
      if (close == std::string::npos) {
        throw TemplateError("unterminated placeholder at offset " +
                            std::to_string(i));
      }
      std::string name = tpl.substr(i + 1, close - i - 1);
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw TemplateError("unbound placeholder {" + name + "}");
      }
      out += it->second;
      i = close + 1;
    } else if (c == '}' && i + 1 < tpl.size() && tpl[i + 1] == '}') {
      out.push_back('}');
      i += 2;
    } else {
      out.push_back(c);
      i += 1;
    }
  }
  return out;
}

void require_placeholder(const std::string& tpl, const std::string& name,
                         const std::string& field) {
  if (tpl.find("{" + name + "}") == std::string::npos) {
    throw TemplateError("template field '" + field + "' is missing {" + name +
                        "}");
  }
}

std::map<std::string, std::string> lang_bindings(const LanguagePair& langs) {
  return {{"source_lang", langs.source}, {"target_lang", langs.target}};
}

}  // namespace

std::string role_name(Role role) {
  switch (role) {
    case Role::System:
      return "system";
    case Role::User:
      return "user";
    case Role::Assistant:
      return "assistant";
  }
  return "user";
}

std::string PromptMode::name() const {
  switch (kind) {
    case Kind::ZeroShot:
      return "zero-shot";
    case Kind::FewShot:
      return "few-shot";
    case Kind::Style:
      return "style";
  }
  return "zero-shot";
}

PromptMode PromptMode::from_name(const std::string& name, int k) {
  if (name == "zero-shot" || name == "zero" || name == "zeroshot") {
    return zero_shot();
  }
  if (name == "few-shot" || name == "few" || name == "fewshot") {
    return few_shot(k);
  }
  if (name == "style") return style(k);
  throw ConfigError("unknown mode '" + name + "'");
}

PromptTemplate PromptTemplate::defaults() {
  PromptTemplate tpl;
  tpl.system =
      "You are a professional translator. Translate the given {source_lang} "
      "text into {target_lang}. Reply with the translation only, without "
      "explanations.";
  tpl.user =
      "Translate the following {source_lang} sentence into {target_lang}:\n"
      "{source}";
  tpl.demo_header =
      "Here are example translations from {source_lang} to {target_lang}:";
  tpl.demo_pair = "{source_lang}: {src}\n{target_lang}: {tgt}";
  tpl.style_header =
      "Here are example sentences from the target domain, written in "
      "{target_lang}. Match their writing style, tone, and terminology in "
      "your translation:";
  tpl.style_sample = "{target_lang}: {text}";
  return tpl;
}

void PromptTemplate::validate() const {
  require_placeholder(user, "source", "user");
  if (system.find("{source_lang}") == std::string::npos &&
      user.find("{source_lang}") == std::string::npos) {
    throw TemplateError("template is missing {source_lang}");
  }
  if (system.find("{target_lang}") == std::string::npos &&
      user.find("{target_lang}") == std::string::npos) {
    throw TemplateError("template is missing {target_lang}");
  }
  require_placeholder(demo_pair, "src", "demo_pair");
  require_placeholder(demo_pair, "tgt", "demo_pair");
  require_placeholder(style_sample, "text", "style_sample");
}

nlohmann::json PromptTemplate::to_json() const {
  return {{"system", system},
          {"user", user},
          {"demo_header", demo_header},
          {"demo_pair", demo_pair},
          {"style_header", style_header},
          {"style_sample", style_sample}};
}

PromptTemplate PromptTemplate::from_json(const nlohmann::json& j) {
  PromptTemplate tpl = defaults();
  auto pick = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j.at(key).get<std::string>();
  };
  pick("system", tpl.system);
  pick("user", tpl.user);
  pick("demo_header", tpl.demo_header);
  pick("demo_pair", tpl.demo_pair);
  pick("style_header", tpl.style_header);
  pick("style_sample", tpl.style_sample);
  return tpl;
}

PromptTemplate PromptTemplate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open template file");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw TemplateError("template file is not valid JSON");
  return from_json(j);
}

void PromptTemplate::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open file for writing");
  out << to_json().dump(2) << '\n';
}

std::string PromptTemplate::hash() const {
  return Sha256::hex(to_json().dump());
}

Prompt build_zero_shot(const Sentence& src, const LanguagePair& langs,
                       const PromptTemplate& tpl) {
  tpl.validate();
  auto bindings = lang_bindings(langs);

  Prompt prompt;
  prompt.mode = PromptMode::zero_shot();
  prompt.messages.push_back({Role::System, render(tpl.system, bindings)});
  bindings["source"] = src.text;
  prompt.messages.push_back({Role::User, render(tpl.user, bindings)});
  return prompt;
}

Prompt build_few_shot(const Sentence& src,
                      const std::vector<ParallelPair>& demos,
                      const LanguagePair& langs, const PromptTemplate& tpl) {
  tpl.validate();
  if (demos.empty()) throw EmptyDemos();
  auto bindings = lang_bindings(langs);

  Prompt prompt;
  prompt.mode = PromptMode::few_shot(int(demos.size()));
  prompt.messages.push_back({Role::System, render(tpl.system, bindings)});

  std::string block = render(tpl.demo_header, bindings);
  for (const ParallelPair& demo : demos) {
    auto pair_bindings = bindings;
    pair_bindings["src"] = demo.src.text;
    pair_bindings["tgt"] = demo.tgt.text;
    block += '\n';
    block += render(tpl.demo_pair, pair_bindings);
    prompt.demo_ids.push_back(demo.src.id);
  }
  prompt.messages.push_back({Role::Assistant, block});

  bindings["source"] = src.text;
  prompt.messages.push_back({Role::User, render(tpl.user, bindings)});
  return prompt;
}

Prompt build_style(const Sentence& src,
                   const std::vector<Sentence>& target_samples,
                   const LanguagePair& langs, const PromptTemplate& tpl) {
  tpl.validate();
  if (target_samples.empty()) throw EmptyDemos();
  auto bindings = lang_bindings(langs);

  Prompt prompt;
  prompt.mode = PromptMode::style(int(target_samples.size()));
  prompt.messages.push_back({Role::System, render(tpl.system, bindings)});

  std::string block = render(tpl.style_header, bindings);
  for (const Sentence& sample : target_samples) {
    auto sample_bindings = bindings;
    sample_bindings["text"] = sample.text;
    block += '\n';
    block += render(tpl.style_sample, sample_bindings);
    prompt.demo_ids.push_back(sample.id);
  }
  prompt.messages.push_back({Role::Assistant, block});

  bindings["source"] = src.text;
  prompt.messages.push_back({Role::User, render(tpl.user, bindings)});
  return prompt;
}

nlohmann::json render_wire(const Prompt& prompt) {
  nlohmann::json wire = nlohmann::json::array();
  for (const Message& m : prompt.messages) {
    wire.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  return wire;
}

std::string wire_canonical(const nlohmann::json& messages) {
  // nlohmann::json orders object keys, so dump() is already canonical.
  return messages.dump();
}

std::string prompt_hash(const nlohmann::json& messages) {
  return Sha256::hex(wire_canonical(messages));
}

}  // namespace stylemt
