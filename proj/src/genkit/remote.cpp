#include <chrono>
#include <future>
#include <httplib.h>
#include <json.hpp>
#include <regex>

#include "bta/core/error.hpp"
#include "bta/genkit/generator.hpp"

namespace bta::genkit {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw Error("bad-config", "not an http(s) URL: " + url);
    }
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

RemoteGenerator::RemoteGenerator(RemoteConfig config) : config_(std::move(config)) {
    split_url(config_.url);
}

std::string RemoteGenerator::request_body(const std::string& prompt) const {
    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array({{{"role", "system"}, {"content", config_.system_prompt}},
                                              {{"role", "user"}, {"content", prompt}}});
    body["temperature"] = config_.temperature;
    body["max_tokens"] = config_.max_tokens;
    body["n"] = 1;
    return body.dump();
}

std::string RemoteGenerator::complete(const std::string& prompt) const {
    const Endpoint ep = split_url(config_.url);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    const std::string body = request_body(prompt);
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        httplib::Client client(ep.origin);
        client.set_connection_timeout(timeout_us);
        client.set_read_timeout(timeout_us);
        client.set_write_timeout(timeout_us);
        if (!config_.api_key.empty()) {
            client.set_bearer_token_auth(config_.api_key);
        }
        const auto res = client.Post(ep.path, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("bad response: ") + e.what();
        }
    }
    throw Error("generator-unavailable", config_.url + ": " + last_error + " after " +
                                             std::to_string(config_.retries + 1) + " attempts");
}

std::vector<GenerationRecord> RemoteGenerator::generate(const GenerationRequest& request, int n) {
    if (n < 1) {
        throw Error("bad-request", "n must be at least 1");
    }
    using Clock = std::chrono::steady_clock;
    std::vector<std::future<std::pair<std::string, double>>> pending;
    for (int i = 0; i < n; ++i) {
        pending.push_back(std::async(std::launch::async, [this, &request] {
            const auto start = Clock::now();
            auto text = complete(request.prompt);
            return std::make_pair(std::move(text),
                                  std::chrono::duration<double, std::milli>(Clock::now() - start).count());
        }));
    }
    std::vector<GenerationRecord> out;
    std::optional<Error> failure;
    for (auto& f : pending) {
        try {
            auto [text, ms] = f.get();
            GenerationRecord r;
            r.prompt = request.prompt;
            r.completion = std::move(text);
            r.latency_ms = ms;
            r.mode = GeneratorMode::Remote;
            annotate(r);
            out.push_back(std::move(r));
        } catch (const Error& e) {
            if (!failure) {
                failure = e;
            }
        }
    }
    if (failure) {
        throw *failure;
    }
    return out;
}

}  // namespace bta::genkit
