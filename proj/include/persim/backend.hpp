#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "persim/jsonl.hpp"

namespace persim {

struct DecodingParams {
    double temperature = 1.0;
    int max_tokens = 1024;
};

struct BackendIdentity {
    std::string name;  // config-level handle, used in artifact paths
    std::string model; // model identifier sent on the wire

    std::string display() const { return model.empty() ? name : name + " (" + model + ")"; }
};

// Chat-completion abstraction. Implementations must tolerate concurrent
// complete() calls; callers treat the backend as stateless.
class ChatBackend {
  public:
    virtual ~ChatBackend() = default;

    virtual const BackendIdentity &identity() const = 0;

    // Returns the assistant message text. Throws TransportError when the
    // backend cannot produce a response.
    virtual std::string complete(const std::string &system_text, const std::string &user_text,
                                 const DecodingParams &params) = 0;
};

// Replays canned responses in call order, for hermetic tests and closed-loop
// runs. Script rows: {"content": "..."} for a response, {"error": "..."} to
// simulate a transport failure. An exhausted script is a transport error.
class ScriptedMockBackend : public ChatBackend {
  public:
    ScriptedMockBackend(BackendIdentity identity, std::vector<Json> script);
    static std::unique_ptr<ScriptedMockBackend> from_file(BackendIdentity identity,
                                                          const std::filesystem::path &path);

    const BackendIdentity &identity() const override { return identity_; }
    std::string complete(const std::string &system_text, const std::string &user_text,
                         const DecodingParams &params) override;

    std::size_t consumed() const;
    std::size_t remaining() const;

    // Request log, for asserting what the engine actually sent.
    struct Call {
        std::string system_text;
        std::string user_text;
        DecodingParams params;
    };
    std::vector<Call> calls() const;

  private:
    BackendIdentity identity_;
    std::vector<Json> script_;
    std::vector<Call> calls_;
    std::size_t cursor_ = 0;
    mutable std::mutex mutex_;
};

// HTTP JSON chat-completion client: POST {model, messages, temperature,
// max_tokens}, answer read from choices[0].message.content. Retries
// rate-limit and server errors with exponential backoff before giving up.
class HttpChatBackend : public ChatBackend {
  public:
    struct Options {
        std::string url; // full endpoint, e.g. http://host:8000/v1/chat/completions
        std::string api_key;
        int transport_retries = 3;
        int timeout_seconds = 120;
    };

    HttpChatBackend(BackendIdentity identity, Options options);

    const BackendIdentity &identity() const override { return identity_; }
    std::string complete(const std::string &system_text, const std::string &user_text,
                         const DecodingParams &params) override;

  private:
    BackendIdentity identity_;
    Options options_;
    std::string scheme_host_; // scheme://host[:port]
    std::string path_;
};

} // namespace persim
