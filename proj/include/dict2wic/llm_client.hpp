#pragma once

#include <chrono>
#include <string>

#include "dict2wic/expansion.hpp"

namespace dict2wic {

struct ChatEndpoint {
  // Full URL of a chat-completions endpoint, e.g.
  // "https://api.openai.com/v1/chat/completions".
  std::string url;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header.
  std::string api_key_env;
  std::chrono::seconds timeout{60};
};

// Chat-completions client. Issues one single-sample request per call:
// {"model", "messages": [{"role": "user", "content": prompt}],
//  "temperature", "max_tokens"} and returns choices[0].message.content.
class ChatCompletionsBackend : public LlmBackend {
 public:
  explicit ChatCompletionsBackend(ChatEndpoint endpoint);

  std::string complete(const CompletionRequest& request) override;

 private:
  ChatEndpoint endpoint_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
};

}  // namespace dict2wic
