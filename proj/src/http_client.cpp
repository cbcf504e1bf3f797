// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/http_client.hpp"

#include <httplib.h>

#include <regex>

#include "groundcite/error.hpp"

namespace groundcite {

ParsedUrl parse_url(const std::string& url) {
    static const std::regex re(R"(^(https?)://([^/:?#]+)(?::(\d+))?([^#]*)$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw validation_error("url", "unsupported URL: " + url);
    ParsedUrl p;
    p.scheme = m[1].str();
    for (auto& c : p.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    p.host = m[2].str();
    p.port = m[3].matched ? std::stoi(m[3].str()) : (p.scheme == "https" ? 443 : 80);
    p.path_and_query = m[4].str();
    if (p.path_and_query.empty() || p.path_and_query[0] != '/') p.path_and_query.insert(0, "/");
    return p;
}

std::string url_encode(const std::string& s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

namespace {

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse send(const HttpRequest& request) override {
        const ParsedUrl url = parse_url(request.url);
        httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());
        client.set_follow_location(true);

        httplib::Headers headers;
        for (const auto& [k, v] : request.headers) headers.emplace(k, v);

        httplib::Result res = request.method == "POST"
                                  ? client.Post(url.path_and_query, headers, request.body, request.content_type)
                                  : client.Get(url.path_and_query, headers);
        if (!res) {
            throw Error(ErrorCode::kTransport,
                        request.method + " " + request.url + " failed: " + httplib::to_string(res.error()));
        }
        return HttpResponse{res->status, res->body, res->get_header_value("Content-Type")};
    }
};

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace groundcite
