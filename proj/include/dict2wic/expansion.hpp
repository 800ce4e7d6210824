#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dict2wic/dictionary.hpp"
#include "dict2wic/matching.hpp"
#include "dict2wic/retry.hpp"

namespace dict2wic {

// Prompt with one placeholder, written either as "{}" or "[zgled]".
class PromptTemplate {
 public:
  static constexpr std::string_view kDefault = "Razširi [zgled] v polno poved";

  PromptTemplate() : PromptTemplate(std::string(kDefault)) {}
  explicit PromptTemplate(std::string pattern);

  std::string render(std::string_view snippet) const;
  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
  std::size_t placeholder_pos_ = 0;
  std::size_t placeholder_len_ = 0;
};

std::string build_prompt(const UsageSnippet& snippet,
                         const PromptTemplate& tmpl = PromptTemplate());

struct ExpansionRequest {
  UsageSnippet snippet;
  std::string prompt;
  int n_generations = 10;
  std::string model_id;
  double temperature = 1.0;
  int max_tokens = 256;
};

struct ExpansionSettings {
  PromptTemplate prompt;
  int n_generations = 10;
  std::string model_id = "gpt-3.5-turbo";
  double temperature = 1.0;
  int max_tokens = 256;
};

ExpansionRequest make_request(const UsageSnippet& snippet,
                              const ExpansionSettings& settings);

enum class GenerationStatus {
  kPending,
  kKept,
  kDroppedLemmaMissing,
  kDroppedDuplicate,
  kDroppedEmpty,
};

std::string to_string(GenerationStatus status);
GenerationStatus generation_status_from_string(std::string_view s);

struct SnippetRef {
  std::string lemma;
  int sense_ordinal = 0;
  int snippet_index = 0;

  auto operator<=>(const SnippetRef&) const = default;
};

struct GeneratedSentence {
  std::string text;  // NFC, trimmed
  SnippetRef source;
  std::string snippet_text;
  int generation_index = 0;
  GenerationStatus status = GenerationStatus::kPending;
  std::optional<std::string> failure;  // set when the backend gave up

  bool operator==(const GeneratedSentence&) const = default;
};

nlohmann::json to_json(const GeneratedSentence& g);
GeneratedSentence generated_from_json(const nlohmann::json& j);

struct CompletionRequest {
  std::string model;
  std::string prompt;
  double temperature = 1.0;
  int max_tokens = 256;
};

// A text-completion service. Implementations throw BackendError (transient
// or not) or ProtocolError; they must be safe to call from several threads.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

// Fails every call; used to run expansion purely from the cache.
class OfflineBackend : public LlmBackend {
 public:
  std::string complete(const CompletionRequest& request) override;
};

struct CacheRecord {
  std::string key;
  std::string model;
  std::string prompt;
  double temperature = 0.0;
  int index = 0;
  std::string text;
};

// Append-only JSONL cache keyed by (model, prompt, temperature, index).
// An empty path keeps the cache in memory only.
class ExpansionCache {
 public:
  ExpansionCache() = default;
  explicit ExpansionCache(std::filesystem::path path);

  static std::string make_key(std::string_view model, std::string_view prompt,
                              double temperature, int index);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const CacheRecord& record);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> entries_;
};

struct ExpansionStats {
  std::size_t cache_hits = 0;
  std::size_t backend_calls = 0;
  std::size_t failures = 0;
};

// Produces request.n_generations sentences, generation_index 0..n-1, with
// statuses kPending (or kDroppedEmpty when the backend gave up).
std::vector<GeneratedSentence> expand_snippet(const ExpansionRequest& request,
                                              LlmBackend& backend,
                                              ExpansionCache& cache,
                                              const RetryPolicy& retry = {},
                                              ExpansionStats* stats = nullptr);

// Expands many requests with at most `max_in_flight` concurrent backend
// calls. Output order is (request order, generation_index).
std::vector<GeneratedSentence> expand_all(
    std::span<const ExpansionRequest> requests, LlmBackend& backend,
    ExpansionCache& cache, const RetryPolicy& retry = {},
    std::size_t max_in_flight = 4, ExpansionStats* stats = nullptr);

// Sets each candidate's status: empty text, then missing lemma, then
// duplicates (by text::dedup_key) of an earlier kept sentence in the same
// (lemma, sense) group. Recomputed from the text, so re-running it on its own
// output gives the same statuses.
std::vector<GeneratedSentence> filter_candidates(
    std::vector<GeneratedSentence> candidates, const LemmaMatcher& matcher);

}  // namespace dict2wic
