#include "stylemt/llm.hpp"

#include <fstream>
#include <sstream>

namespace stylemt {

nlohmann::json ModelParams::to_json() const {
  nlohmann::json j = {{"model", model_name}, {"temperature", temperature}};
  if (max_tokens) j["max_tokens"] = *max_tokens;
  return j;
}

ModelParams ModelParams::from_json(const nlohmann::json& j) {
  ModelParams p;
  if (j.contains("model")) p.model_name = j.at("model").get<std::string>();
  if (j.contains("temperature")) p.temperature = j.at("temperature").get<double>();
  if (j.contains("max_tokens") && !j.at("max_tokens").is_null()) {
    p.max_tokens = j.at("max_tokens").get<int>();
  }
  if (p.temperature < 0.0) throw ConfigError("temperature must be >= 0");
  return p;
}

std::string extract_source_line(const nlohmann::json& messages) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if ((*it).value("role", "") == "user") {
      std::string content = (*it).value("content", "");
      std::size_t nl = content.rfind('\n');
      return nl == std::string::npos ? content : content.substr(nl + 1);
    }
  }
  return "";
}

std::optional<std::string> extract_first_demo_target(
    const nlohmann::json& messages, const LanguagePair& langs) {
  const std::string prefix = langs.target + ": ";
  for (const auto& m : messages) {
    if (m.value("role", "") != "assistant") continue;
    std::istringstream lines(m.value("content", ""));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
  }
  return std::nullopt;
}

CompletionResult EchoSourceBackend::complete(const nlohmann::json& messages,
                                             const ModelParams&) {
  return {extract_source_line(messages), 0, id(), 1};
}

CompletionResult CopyBestDemoBackend::complete(const nlohmann::json& messages,
                                               const ModelParams&) {
  auto demo = extract_first_demo_target(messages, langs_);
  return {demo ? *demo : extract_source_line(messages), 0, id(), 1};
}

PlaybackBackend PlaybackBackend::from_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open fixture file");
  std::map<std::string, std::string> fixtures;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++line_no;
      continue;
    }
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.contains("prompt_hash") ||
        !obj.contains("text")) {
      throw FormatError(line_no,
                        "expected {\"prompt_hash\": str, \"text\": str}");
    }
    fixtures[obj["prompt_hash"].get<std::string>()] =
        obj["text"].get<std::string>();
    ++line_no;
  }
  return PlaybackBackend(std::move(fixtures));
}

CompletionResult PlaybackBackend::complete(const nlohmann::json& messages,
                                           const ModelParams&) {
  std::string hash = prompt_hash(messages);
  auto it = fixtures_.find(hash);
  if (it == fixtures_.end()) throw FixtureMiss(hash);
  return {it->second, 0, id(), 1};
}

}  // namespace stylemt
