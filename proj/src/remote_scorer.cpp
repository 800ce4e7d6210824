#include <atomic>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "dict2wic/errors.hpp"
#include "dict2wic/scorer.hpp"
#include "http_util.hpp"

namespace dict2wic {

RemoteScorer::RemoteScorer(RemoteScorerConfig config)
    : config_(std::move(config)) {
  if (config_.batch_size == 0) throw InvalidArgument("batch_size must be positive");
  const detail::SplitUrl parts = detail::split_url(config_.url);
  origin_ = parts.origin;
  path_ = parts.path;
  if (path_.empty() || path_.back() != '/') path_ += '/';
  path_ += "v1/score";
}

std::vector<double> RemoteScorer::post_batch(
    std::span<const ScoreQuery> batch) const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const ScoreQuery& q : batch) pairs.push_back(to_wire(q));
  const std::string body = nlohmann::json{{"pairs", std::move(pairs)}}.dump();

  const std::string response = with_retries(config_.retry, [&] {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      throw BackendError("score request failed: " + httplib::to_string(res.error()),
                         /*transient=*/true);
    }
    if (res->status != 200) {
      throw BackendError("scorer returned HTTP " + std::to_string(res->status),
                         detail::transient_status(res->status));
    }
    return res->body;
  });

  // Contract violations are not retried.
  std::vector<double> scores;
  try {
    scores = nlohmann::json::parse(response).at("scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed score response: ") + e.what());
  }
  if (scores.size() != batch.size()) {
    throw ProtocolError("scorer returned " + std::to_string(scores.size()) +
                        " scores for a batch of " + std::to_string(batch.size()));
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw ProtocolError("score outside [0, 1]");
  }
  return scores;
}

std::vector<double> RemoteScorer::score_batch(std::span<const ScoreQuery> queries) {
  const std::size_t n_batches =
      (queries.size() + config_.batch_size - 1) / config_.batch_size;
  std::vector<double> out(queries.size());
  std::vector<std::string> failures(n_batches);
  std::vector<std::exception_ptr> protocol_errors(n_batches);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t b = next++; b < n_batches; b = next++) {
      const std::size_t begin = b * config_.batch_size;
      const std::size_t len = std::min(config_.batch_size, queries.size() - begin);
      try {
        const auto scores = post_batch(queries.subspan(begin, len));
        std::copy(scores.begin(), scores.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
      } catch (const ProtocolError&) {
        protocol_errors[b] = std::current_exception();
      } catch (const Error& e) {
        failures[b] = e.what();
      }
    }
  };
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(config_.max_concurrent_batches, n_batches));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }

  for (const auto& error : protocol_errors) {
    if (error) std::rethrow_exception(error);
  }
  std::vector<std::string> failed_ids;
  std::string first_failure;
  for (std::size_t b = 0; b < n_batches; ++b) {
    if (failures[b].empty()) continue;
    if (first_failure.empty()) first_failure = failures[b];
    const std::size_t begin = b * config_.batch_size;
    const std::size_t end = std::min(begin + config_.batch_size, queries.size());
    for (std::size_t i = begin; i < end; ++i) {
      failed_ids.push_back(queries[i].id1 + "|" + queries[i].id2);
    }
  }
  if (!failed_ids.empty()) {
    throw ScorerError("remote scoring failed: " + first_failure, std::move(failed_ids));
  }
  return out;
}

}  // namespace dict2wic
