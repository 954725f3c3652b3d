// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "stub_server.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "deepscan/error.hpp"
#include "deepscan/experts/replay.hpp"
#include "deepscan/experts/wire.hpp"

namespace deepscan::testing {
namespace {

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

}  // namespace

StubServer::StubServer(ExpertBundle experts, std::size_t max_body)
    : experts_(std::move(experts)), server_(std::make_unique<httplib::Server>()) {
    server_->set_payload_max_length(max_body);
    server_->Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, {{"status", "ok"}});
    });
    for (const auto endpoint : {wire::kSearch, wire::kSegment, wire::kDetect, wire::kComplete}) {
        server_->Post(wire::path_for(endpoint), [this, endpoint](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            const auto body = nlohmann::json::parse(req.body, nullptr, false);
            if (body.is_discarded()) return reply(res, 400, wire::error_response("body is not JSON"));
            try {
                reply(res, 200, serve_request(experts_, endpoint, body));
            } catch (const InvalidInput& e) {
                reply(res, 400, wire::error_response(e.what()));
            } catch (const std::exception& e) {
                reply(res, 500, wire::error_response(e.what()));
            }
        });
    }
    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) reply(res, res.status, wire::error_response(httplib::status_message(res.status)));
    });
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("stub server could not bind");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

StubServer::~StubServer() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string StubServer::url() const { return "http://127.0.0.1:" + std::to_string(port_); }

}  // namespace deepscan::testing
