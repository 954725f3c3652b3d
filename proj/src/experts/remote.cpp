// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/remote.hpp"

#include <httplib.h>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

std::unique_ptr<httplib::Client> connect(const RemoteEndpoint& ep, double timeout) {
    auto cli = std::make_unique<httplib::Client>(ep.host, ep.port);
    const auto secs = static_cast<time_t>(timeout);
    const auto usecs = static_cast<time_t>((timeout - static_cast<double>(secs)) * 1e6);
    cli->set_connection_timeout(secs, usecs);
    cli->set_read_timeout(secs, usecs);
    cli->set_write_timeout(secs, usecs);
    return cli;
}

std::pair<int, std::string> unwrap(const httplib::Result& res, const std::string& path) {
    if (!res) throw TransportError(path + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

}  // namespace

RemoteEndpoint RemoteEndpoint::parse(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw InvalidInput("remote url must start with http://: " + url);
    std::string rest = url.substr(scheme.size());
    RemoteEndpoint ep;
    const auto slash = rest.find('/');
    if (slash != std::string::npos) {
        ep.prefix = rest.substr(slash);
        rest.resize(slash);
        while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
    }
    const auto colon = rest.rfind(':');
    if (colon != std::string::npos) {
        const std::string port = rest.substr(colon + 1);
        try {
            std::size_t used = 0;
            ep.port = std::stoi(port, &used);
            if (used != port.size() || ep.port < 1 || ep.port > 65535) throw std::out_of_range(port);
        } catch (const std::exception&) {
            throw InvalidInput("bad port in remote url: " + url);
        }
        rest.resize(colon);
    }
    if (rest.empty()) throw InvalidInput("remote url has no host: " + url);
    ep.host = rest;
    return ep;
}

std::string RemoteEndpoint::url() const {
    return "http://" + host + ":" + std::to_string(port) + prefix;
}

HttpTransport::HttpTransport(RemoteEndpoint endpoint, double timeout_seconds)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

std::pair<int, std::string> HttpTransport::post_raw(const std::string& path,
                                                    const std::string& body) const {
    auto cli = connect(endpoint_, timeout_seconds_);
    const std::string full = endpoint_.prefix + path;
    return unwrap(cli->Post(full, body, "application/json"), full);
}

std::pair<int, std::string> HttpTransport::get_raw(const std::string& path) const {
    auto cli = connect(endpoint_, timeout_seconds_);
    const std::string full = endpoint_.prefix + path;
    return unwrap(cli->Get(full), full);
}

nlohmann::json HttpTransport::call(const wire::Request& req) const {
    const std::string path = wire::path_for(req.endpoint);
    const auto [status, body] = post_raw(path, wire::body_of(req).dump());
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (status != 200) {
        std::string msg = path + " returned HTTP " + std::to_string(status);
        if (j.is_object() && j.contains("error") && j["error"].is_string())
            msg += ": " + j["error"].get<std::string>();
        if (status >= 500) throw TransportError(msg);
        throw ProtocolError(msg);
    }
    if (j.is_discarded()) throw ProtocolError(path + " returned a body that is not JSON");
    return j;
}

ExpertBundle make_remote_experts(const std::string& url, double timeout_seconds) {
    return wire::WireExperts::bundle(
        std::make_shared<HttpTransport>(RemoteEndpoint::parse(url), timeout_seconds));
}

}  // namespace deepscan
