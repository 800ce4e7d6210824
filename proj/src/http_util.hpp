#pragma once

#include <string>
#include <string_view>

#include "dict2wic/errors.hpp"

namespace dict2wic::detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

inline SplitUrl split_url(std::string_view url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw InvalidArgument("URL '" + std::string(url) + "' has no scheme");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) {
    return {std::string(url), "/"};
  }
  return {std::string(url.substr(0, path_start)),
          std::string(url.substr(path_start))};
}

// Retryable HTTP statuses: rate limiting and server-side failures.
inline bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

}  // namespace dict2wic::detail
