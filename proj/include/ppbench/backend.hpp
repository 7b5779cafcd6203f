#pragma once

#include "ppbench/ingest.hpp"
#include "ppbench/patterns.hpp"
#include "ppbench/types.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace ppbench {

struct ModelConfig {
    std::string model_name = "gpt-3.5-turbo";
    double temperature = 0.4;
    int max_output_tokens = 1024;
    std::chrono::milliseconds request_timeout{30000};
    int max_retries = 3;
};

struct ChatTurn {
    std::string role; // "user" or "assistant"
    std::string text;

    bool operator==(const ChatTurn&) const = default;
};

struct RawResponse {
    std::string text; // final assistant turn
    std::vector<ChatTurn> turns;
    std::chrono::milliseconds latency{0};
    bool truncated = false;
};

struct FollowUpPolicy {
    int max_followups = 1;
    std::string followup_text =
        "Proceed with your best interpretation and provide the final answer now.";
    // Returns true when the reply contains parseable answer tokens for the
    // task at hand. A reply with no answer tokens that also reads as a
    // question triggers the follow-up. Unset means "always answered".
    std::function<bool(const std::string&)> has_answer;
};

struct ChatRequest {
    RenderedPrompt prompt;
    ModelConfig config;
    int repetition = 0;
    std::vector<ChatTurn> turns; // conversation so far, user turn last
};

struct SendResult {
    std::string text;
    std::chrono::milliseconds latency{0};
    bool truncated = false;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual SendResult send(const ChatRequest& request) = 0;
    virtual std::string kind() const = 0;
};

// Drives the turn loop: first reply, then at most max_followups automatic
// nudges when the reply is a clarifying question (no answer tokens and an
// interrogative shape). The transcript records every turn.
RawResponse complete(ChatBackend& backend, const RenderedPrompt& prompt,
                     const ModelConfig& config, const FollowUpPolicy& policy,
                     int repetition = 0);

// Stable key for replay fixtures: hash of (task, pattern, temperature,
// document, payload ids, repetition). Prompt wording is deliberately not
// part of the key, so template whitespace edits do not invalidate fixtures.
std::string fixture_key(const RenderedPrompt& prompt, double temperature, int repetition);

// Live HTTP chat-completion client for the common JSON schema
// {model, messages[], temperature, max_tokens}. Retries transport errors
// with exponential backoff. API keys never reach the log.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string endpoint, std::string api_key);

    SendResult send(const ChatRequest& request) override;
    std::string kind() const override { return "live"; }

    void set_logger(std::function<void(const std::string&)> log) { log_ = std::move(log); }
    void set_backoff_base(std::chrono::milliseconds base) { backoff_base_ = base; }

private:
    std::string endpoint_;
    std::string api_key_;
    std::function<void(const std::string&)> log_;
    std::chrono::milliseconds backoff_base_{500};
};

// Replays committed fixtures; one JSON file per fixture key.
class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(std::filesystem::path dir) : dir_(std::move(dir)) {}

    SendResult send(const ChatRequest& request) override;
    std::string kind() const override { return "replay"; }

private:
    std::filesystem::path dir_;
};

// Forwards to an inner backend and appends every reply to the fixture
// file for the request's key, producing a replayable recording.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(ChatBackend& inner, std::filesystem::path dir)
        : inner_(inner), dir_(std::move(dir)) {}

    SendResult send(const ChatRequest& request) override;
    std::string kind() const override { return "record:" + inner_.kind(); }

private:
    ChatBackend& inner_;
    std::filesystem::path dir_;
    std::mutex mutex_;
};

// Ground truth a synthetic backend answers from.
struct OracleData {
    std::map<std::string, ReqClass> labels; // classification truth
    struct Doc {
        std::set<std::string> ids;
        std::map<std::string, std::set<std::string>> links; // query -> referencers
    };
    std::map<std::string, Doc> docs; // keyed by clean-document name
};

enum class OracleMode { Perfect, Empty, Inverted };

// Perfect answers with exactly the ground truth in the Template output
// format, Empty returns no positives, Inverted returns the complement of
// the truth within the candidate universe.
std::unique_ptr<ChatBackend> make_oracle_backend(OracleData data, OracleMode mode);

// Deterministic stand-in for a hosted model: answers derive from ground
// truth with temperature-scaled perturbations, formatted per pattern, and
// the question-inviting patterns sometimes ask a clarifying question
// first. Seeded purely by the fixture key, so recordings are portable.
class SimulatedModelBackend : public ChatBackend {
public:
    explicit SimulatedModelBackend(OracleData data) : data_(std::move(data)) {}

    SendResult send(const ChatRequest& request) override;
    std::string kind() const override { return "sim"; }

private:
    OracleData data_;
};

} // namespace ppbench
