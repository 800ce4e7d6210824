#include "dict2wic/expansion.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "dict2wic/errors.hpp"
#include "dict2wic/hash.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

PromptTemplate::PromptTemplate(std::string pattern)
    : pattern_(std::move(pattern)) {
  for (std::string_view token : {std::string_view("{}"),
                                 std::string_view("[zgled]")}) {
    const std::size_t pos = pattern_.find(token);
    if (pos != std::string::npos) {
      placeholder_pos_ = pos;
      placeholder_len_ = token.size();
      return;
    }
  }
  throw InvalidArgument("prompt template '" + pattern_ +
                        "' has no {} or [zgled] placeholder");
}

std::string PromptTemplate::render(std::string_view snippet) const {
  std::string out = pattern_;
  out.replace(placeholder_pos_, placeholder_len_, snippet);
  return out;
}

std::string build_prompt(const UsageSnippet& snippet,
                         const PromptTemplate& tmpl) {
  if (snippet.text.empty()) throw InvalidArgument("empty usage snippet");
  return tmpl.render(snippet.text);
}

ExpansionRequest make_request(const UsageSnippet& snippet,
                              const ExpansionSettings& settings) {
  if (settings.n_generations < 1) {
    throw InvalidArgument("n_generations must be at least 1");
  }
  ExpansionRequest request;
  request.snippet = snippet;
  request.prompt = build_prompt(snippet, settings.prompt);
  request.n_generations = settings.n_generations;
  request.model_id = settings.model_id;
  request.temperature = settings.temperature;
  request.max_tokens = settings.max_tokens;
  return request;
}

std::string to_string(GenerationStatus status) {
  switch (status) {
    case GenerationStatus::kPending:
      return "pending";
    case GenerationStatus::kKept:
      return "kept";
    case GenerationStatus::kDroppedLemmaMissing:
      return "dropped_lemma_missing";
    case GenerationStatus::kDroppedDuplicate:
      return "dropped_duplicate";
    case GenerationStatus::kDroppedEmpty:
      return "dropped_empty";
  }
  return "pending";
}

GenerationStatus generation_status_from_string(std::string_view s) {
  for (GenerationStatus status :
       {GenerationStatus::kPending, GenerationStatus::kKept,
        GenerationStatus::kDroppedLemmaMissing,
        GenerationStatus::kDroppedDuplicate, GenerationStatus::kDroppedEmpty}) {
    if (to_string(status) == s) return status;
  }
  throw SchemaError("unknown generation status '" + std::string(s) + "'");
}

nlohmann::json to_json(const GeneratedSentence& g) {
  nlohmann::json j = {{"lemma", g.source.lemma},
                      {"sense", g.source.sense_ordinal},
                      {"snippet", g.source.snippet_index},
                      {"snippet_text", g.snippet_text},
                      {"index", g.generation_index},
                      {"text", g.text},
                      {"status", to_string(g.status)}};
  if (g.failure) j["failure"] = *g.failure;
  return j;
}

GeneratedSentence generated_from_json(const nlohmann::json& j) {
  try {
    GeneratedSentence g;
    g.source.lemma = j.at("lemma").get<std::string>();
    g.source.sense_ordinal = j.at("sense").get<int>();
    g.source.snippet_index = j.at("snippet").get<int>();
    g.snippet_text = j.value("snippet_text", std::string());
    g.generation_index = j.at("index").get<int>();
    g.text = j.at("text").get<std::string>();
    g.status = generation_status_from_string(j.at("status").get<std::string>());
    if (j.contains("failure")) g.failure = j.at("failure").get<std::string>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("generation record: ") + e.what());
  }
}

std::string OfflineBackend::complete(const CompletionRequest& request) {
  throw BackendError("offline: no cached completion for prompt '" +
                         request.prompt + "'",
                     /*transient=*/false);
}

ExpansionCache::ExpansionCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      entries_[j.at("key").get<std::string>()] = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      // A torn final line from an interrupted writer is tolerated.
      if (i + 1 == lines.size()) break;
      throw ParseError(i + 1, "corrupt cache record in " + path_.string());
    }
  }
}

std::string ExpansionCache::make_key(std::string_view model,
                                     std::string_view prompt,
                                     double temperature, int index) {
  const nlohmann::json canonical = {model, prompt, temperature, index};
  return sha256_hex(canonical.dump());
}

std::optional<std::string> ExpansionCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ExpansionCache::store(const CacheRecord& record) {
  std::lock_guard lock(mutex_);
  if (!entries_.emplace(record.key, record.text).second) return;
  if (path_.empty()) return;
  const nlohmann::json j = {{"key", record.key},
                            {"model", record.model},
                            {"prompt", record.prompt},
                            {"temperature", record.temperature},
                            {"index", record.index},
                            {"text", record.text}};
  // One write per record so a crash leaves at most a torn last line.
  const std::string line = j.dump() + "\n";
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw Error("io_error", "cannot append to " + path_.string());
}

std::size_t ExpansionCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

struct AtomicStats {
  std::atomic<std::size_t> cache_hits{0};
  std::atomic<std::size_t> backend_calls{0};
  std::atomic<std::size_t> failures{0};

  void export_to(ExpansionStats* stats) const {
    if (stats == nullptr) return;
    stats->cache_hits += cache_hits;
    stats->backend_calls += backend_calls;
    stats->failures += failures;
  }
};

GeneratedSentence generate_one(const ExpansionRequest& request, int index,
                               LlmBackend& backend, ExpansionCache& cache,
                               const RetryPolicy& retry, AtomicStats& stats) {
  GeneratedSentence g;
  g.source = {request.snippet.lemma, request.snippet.sense_ordinal,
              request.snippet.index};
  g.snippet_text = request.snippet.text;
  g.generation_index = index;

  const std::string key = ExpansionCache::make_key(
      request.model_id, request.prompt, request.temperature, index);
  if (auto cached = cache.lookup(key)) {
    ++stats.cache_hits;
    g.text = text::normalize(*cached);
    return g;
  }
  const CompletionRequest call{request.model_id, request.prompt,
                               request.temperature, request.max_tokens};
  try {
    std::string raw = with_retries(retry, [&] {
      ++stats.backend_calls;
      return backend.complete(call);
    });
    cache.store({key, request.model_id, request.prompt, request.temperature,
                 index, raw});
    g.text = text::normalize(raw);
  } catch (const Error& e) {
    ++stats.failures;
    g.status = GenerationStatus::kDroppedEmpty;
    g.failure = e.what();
  }
  return g;
}

}  // namespace

std::vector<GeneratedSentence> expand_snippet(const ExpansionRequest& request,
                                              LlmBackend& backend,
                                              ExpansionCache& cache,
                                              const RetryPolicy& retry,
                                              ExpansionStats* stats) {
  return expand_all(std::span(&request, 1), backend, cache, retry, 1, stats);
}

std::vector<GeneratedSentence> expand_all(
    std::span<const ExpansionRequest> requests, LlmBackend& backend,
    ExpansionCache& cache, const RetryPolicy& retry, std::size_t max_in_flight,
    ExpansionStats* stats) {
  struct Task {
    std::size_t request;
    int index;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < requests.size(); ++r) {
    if (requests[r].n_generations < 1) {
      throw InvalidArgument("n_generations must be at least 1");
    }
    if (requests[r].prompt.find(requests[r].snippet.text) == std::string::npos) {
      throw InvalidArgument("prompt does not contain the snippet text");
    }
    for (int g = 0; g < requests[r].n_generations; ++g) tasks.push_back({r, g});
  }

  std::vector<GeneratedSentence> out(tasks.size());
  AtomicStats counters;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      out[t] = generate_one(requests[tasks[t].request], tasks[t].index, backend,
                            cache, retry, counters);
    }
  };
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(max_in_flight, tasks.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }
  counters.export_to(stats);
  return out;
}

std::vector<GeneratedSentence> filter_candidates(
    std::vector<GeneratedSentence> candidates, const LemmaMatcher& matcher) {
  for (GeneratedSentence& g : candidates) {
    g.text = text::normalize(g.text);
    if (g.text.empty()) {
      g.status = GenerationStatus::kDroppedEmpty;
    } else if (!matcher.present(g.text, g.source.lemma)) {
      g.status = GenerationStatus::kDroppedLemmaMissing;
    } else {
      g.status = GenerationStatus::kKept;
    }
  }
  std::set<std::tuple<std::string, int, std::string>> seen;
  for (GeneratedSentence& g : candidates) {
    if (g.status != GenerationStatus::kKept) continue;
    auto key = std::make_tuple(g.source.lemma, g.source.sense_ordinal,
                               text::dedup_key(g.text));
    if (!seen.insert(std::move(key)).second) {
      g.status = GenerationStatus::kDroppedDuplicate;
    }
  }
  return candidates;
}

}  // namespace dict2wic
