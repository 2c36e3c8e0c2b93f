#include "persim/backend.hpp"

#include <chrono>
#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT // https endpoints need TLS
#endif
#include <httplib.h>

#include "persim/error.hpp"

namespace persim {

ScriptedMockBackend::ScriptedMockBackend(BackendIdentity identity, std::vector<Json> script)
    : identity_(std::move(identity)), script_(std::move(script)) {}

std::unique_ptr<ScriptedMockBackend> ScriptedMockBackend::from_file(
    BackendIdentity identity, const std::filesystem::path &path) {
    return std::make_unique<ScriptedMockBackend>(std::move(identity), read_jsonl(path));
}

std::string ScriptedMockBackend::complete(const std::string &system_text,
                                          const std::string &user_text,
                                          const DecodingParams &params) {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.push_back(Call{system_text, user_text, params});
    if (cursor_ >= script_.size()) {
        throw TransportError("mock backend '" + identity_.name + "' script exhausted after " +
                             std::to_string(script_.size()) + " responses");
    }
    const Json &row = script_[cursor_++];
    if (row.contains("error")) {
        throw TransportError("mock backend '" + identity_.name +
                             "' scripted error: " + row.at("error").get<std::string>());
    }
    if (!row.contains("content") || !row.at("content").is_string()) {
        throw TransportError("mock backend '" + identity_.name +
                             "' script row lacks a content string");
    }
    return row.at("content").get<std::string>();
}

std::size_t ScriptedMockBackend::consumed() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cursor_;
}

std::size_t ScriptedMockBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return script_.size() - cursor_;
}

std::vector<ScriptedMockBackend::Call> ScriptedMockBackend::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

HttpChatBackend::HttpChatBackend(BackendIdentity identity, Options options)
    : identity_(std::move(identity)), options_(std::move(options)) {
    const auto scheme_end = options_.url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("backend url must include a scheme: " + options_.url);
    }
    const auto path_start = options_.url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_ = options_.url;
        path_ = "/";
    } else {
        scheme_host_ = options_.url.substr(0, path_start);
        path_ = options_.url.substr(path_start);
    }
}

std::string HttpChatBackend::complete(const std::string &system_text,
                                      const std::string &user_text,
                                      const DecodingParams &params) {
    Json messages = Json::array();
    if (!system_text.empty()) {
        messages.push_back({{"role", "system"}, {"content", system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", user_text}});
    Json body = {{"model", identity_.model},
                 {"messages", messages},
                 {"temperature", params.temperature},
                 {"max_tokens", params.max_tokens}};

    httplib::Headers headers;
    if (!options_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + options_.api_key);
    }

    std::string last_error;
    for (int attempt = 0; attempt <= options_.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
        }
        httplib::Client client(scheme_host_);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        auto result = client.Post(path_, headers, body.dump(), "application/json");
        if (!result) {
            last_error = "connection failed: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status == 429 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            continue; // retryable
        }
        if (result->status != 200) {
            throw TransportError("backend '" + identity_.name + "' returned HTTP " +
                                 std::to_string(result->status) + ": " + result->body);
        }
        Json response = Json::parse(result->body, nullptr, false);
        if (response.is_discarded() || !response.contains("choices") ||
            !response.at("choices").is_array() || response.at("choices").empty()) {
            throw TransportError("backend '" + identity_.name +
                                 "' returned an unparsable completion response");
        }
        const Json &first = response.at("choices").at(0);
        if (!first.contains("message") || !first.at("message").contains("content")) {
            throw TransportError("backend '" + identity_.name +
                                 "' response choice has no message content");
        }
        return first.at("message").at("content").get<std::string>();
    }
    throw TransportError("backend '" + identity_.name + "' unreachable after " +
                         std::to_string(options_.transport_retries + 1) +
                         " attempts; last error: " + last_error);
}

} // namespace persim
