#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace sdglens::net {

struct HttpResult {
  bool transport_ok = false;  // false: connection refused, timeout, TLS failure, ...
  int status = 0;
  std::string body;
  std::string error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// Supports http:// and https:// URLs with an optional port.
HttpResult get(const std::string& url, std::chrono::milliseconds timeout, const Headers& headers = {});
HttpResult post_json(const std::string& url, const std::string& body, std::chrono::milliseconds timeout,
                     const Headers& headers = {});

bool is_url(const std::string& source);

}  // namespace sdglens::net
