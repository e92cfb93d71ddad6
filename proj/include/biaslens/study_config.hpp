#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace biaslens {

struct SamplingParams {
  double temperature = 1.0;
  int max_tokens = 64;
  double request_timeout_seconds = 30.0;
  int max_retries = 5;
  int parallelism = 4;
};

struct LanguageSpec {
  std::string code;         // ISO-639-1
  std::string prompt_text;  // byte-exact UTF-8, interior whitespace preserved
  bool is_reference = false;
};

// Declarative audit definition: which prompts, in which languages, against
// which model versions, and how many draws per cell.
struct StudyConfig {
  std::string study_id;
  std::string issue;
  std::string positive_class;  // meaning of outcome == true
  std::vector<LanguageSpec> languages;
  std::vector<std::string> models;
  int samples_per_cell = 500;
  SamplingParams sampling;

  const LanguageSpec& reference() const;
  const LanguageSpec* find_language(const std::string& code) const;
  bool has_model(const std::string& model_id) const;
  std::vector<std::string> language_codes() const;
};

// Throws ValidationError naming the violated rule.
void validate(const StudyConfig& config);

StudyConfig load_study_config(const std::filesystem::path& path);
StudyConfig parse_study_config(const std::string& json_text);
std::string serialize_study_config(const StudyConfig& config);
void save_study_config(const StudyConfig& config,
                       const std::filesystem::path& path);

// The two built-in studies (abortion; Catalan independence), constant across
// invocations and platforms.
std::vector<StudyConfig> builtin_studies();

// Resolves --study/--config: name of a built-in study or a config file path.
StudyConfig resolve_study(const std::string& study_name,
                          const std::string& config_path);

}  // namespace biaslens
