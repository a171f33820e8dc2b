#include "net.hpp"

#include <httplib.h>

#include "error.hpp"

namespace sdglens::net {

namespace {

struct UrlParts {
  std::string origin;
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("not a URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Client make_client(const std::string& origin, std::chrono::milliseconds timeout) {
  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  return client;
}

httplib::Headers to_headers(const Headers& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

HttpResult convert(const httplib::Result& res) {
  HttpResult out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.transport_ok = true;
  out.status = res->status;
  out.body = res->body;
  return out;
}

}  // namespace

bool is_url(const std::string& source) {
  return source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0;
}

HttpResult get(const std::string& url, std::chrono::milliseconds timeout, const Headers& headers) {
  const auto parts = split_url(url);
  auto client = make_client(parts.origin, timeout);
  return convert(client.Get(parts.path, to_headers(headers)));
}

HttpResult post_json(const std::string& url, const std::string& body, std::chrono::milliseconds timeout,
                     const Headers& headers) {
  const auto parts = split_url(url);
  auto client = make_client(parts.origin, timeout);
  return convert(client.Post(parts.path, to_headers(headers), body, "application/json"));
}

}  // namespace sdglens::net
