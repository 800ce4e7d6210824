#include "dict2wic/llm_client.hpp"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "http_util.hpp"

namespace dict2wic {

ChatCompletionsBackend::ChatCompletionsBackend(ChatEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  const detail::SplitUrl parts = detail::split_url(endpoint_.url);
  origin_ = parts.origin;
  path_ = parts.path;
  if (!endpoint_.api_key_env.empty()) {
    const char* key = std::getenv(endpoint_.api_key_env.c_str());
    if (key == nullptr) {
      throw InvalidArgument("environment variable " + endpoint_.api_key_env +
                            " is not set");
    }
    api_key_ = key;
  }
}

std::string ChatCompletionsBackend::complete(const CompletionRequest& request) {
  const nlohmann::json body = {
      {"model", request.model},
      {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens}};

  // httplib clients are not shareable across threads; one per call.
  httplib::Client client(origin_);
  client.set_connection_timeout(endpoint_.timeout);
  client.set_read_timeout(endpoint_.timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw BackendError("chat request failed: " + httplib::to_string(res.error()),
                       /*transient=*/true);
  }
  if (res->status != 200) {
    throw BackendError("chat endpoint returned HTTP " +
                           std::to_string(res->status),
                       detail::transient_status(res->status));
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed chat response: ") + e.what());
  }
}

}  // namespace dict2wic
