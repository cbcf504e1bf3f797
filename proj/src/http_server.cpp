// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include <thread>

#include <nlohmann/json.hpp>

#include "service_server.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {

ApiRequest to_api(const httplib::Request& req) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    for (const auto& [k, v] : req.headers) r.headers.emplace(detail::to_lower(k), v);
    r.body = req.body;
    return r;
}

void write(const ApiResponse& api, httplib::Response& res) {
    res.status = api.status;
    for (const auto& [k, v] : api.headers) res.set_header(k, v);
    res.set_content(api.body, api.content_type);
}

}  // namespace

void Service::serve() {
    auto& http = server_->http;
    http.set_payload_max_length(cfg_.service.max_upload_bytes);

    auto handler = [this](const httplib::Request& req, httplib::Response& res) { write(handle(to_api(req)), res); };
    http.Get(R"(/api/.*)", handler);
    http.Post(R"(/api/.*)", handler);
    http.Put(R"(/api/.*)", handler);
    http.Delete(R"(/api/.*)", handler);

    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            msg = e.what();
        } catch (...) {
        }
        ApiResponse api;
        api.status = 500;
        api.body = nlohmann::json{{"error", {{"code", "internal_error"}, {"message", msg}}}}.dump();
        write(api, res);
    });
    const std::size_t limit = cfg_.service.max_upload_bytes;
    http.set_error_handler([limit](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        if (res.status == 413) {
            write(error_response(Error(ErrorCode::kPayloadTooLarge,
                                       "the upload exceeds the limit of " + std::to_string(limit) + " bytes",
                                       "document")),
                  res);
        } else if (res.status == 404) {
            write(error_response(Error(ErrorCode::kNotFound, "not found: " + req.path)), res);
        }
    });

    std::error_code ec;
    if (!cfg_.service.static_dir.empty() && std::filesystem::is_directory(cfg_.service.static_dir, ec)) {
        http.set_mount_point("/", cfg_.service.static_dir);
    }

    int port = cfg_.service.port;
    if (port == 0) {
        port = http.bind_to_any_port(cfg_.service.host);
    } else if (!http.bind_to_port(cfg_.service.host, port)) {
        port = -1;
    }
    if (port < 0) throw Error(ErrorCode::kIo, "cannot listen on " + cfg_.service.host + ":" +
                                                  std::to_string(cfg_.service.port));
    bound_port_ = port;
    http.listen_after_bind();
    bound_port_ = 0;
}

void Service::stop() { server_->http.stop(); }

bool Service::wait_until_listening(std::chrono::milliseconds timeout) const {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        if (bound_port_ > 0 && server_->http.is_running()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return false;
}

}  // namespace groundcite
