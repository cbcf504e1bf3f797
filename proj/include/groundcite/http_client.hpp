// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace groundcite {

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string content_type;
};

struct HttpRequest {
    std::string method = "GET";  // GET | POST
    std::string url;
    std::string body;
    std::string content_type = "application/json";
    std::vector<std::pair<std::string, std::string>> headers;
    std::chrono::milliseconds timeout{30000};
};

/// Minimal HTTP transport. Throws Error(kTransport) when no response could be
/// obtained; non-2xx responses are returned, not thrown.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_default_transport();

struct ParsedUrl {
    std::string scheme;  // "http" | "https"
    std::string host;
    int port = 0;
    std::string path_and_query;  // always starts with '/'
};

/// Throws a validation error for anything other than http(s)://host[:port][/path].
ParsedUrl parse_url(const std::string& url);

/// Percent-encodes a query-string component.
std::string url_encode(const std::string& s);

}  // namespace groundcite
