#include "ppbench/backend.hpp"

#include "ppbench/parse.hpp"
#include "ppbench/rng.hpp"
#include "ppbench/text_util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace ppbench {

namespace {

using nlohmann::json;

std::string canonical_temperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", t);
    return buf;
}

int assistant_turns(const std::vector<ChatTurn>& turns) {
    return static_cast<int>(
        std::count_if(turns.begin(), turns.end(),
                      [](const ChatTurn& t) { return t.role == "assistant"; }));
}

std::string join_ids(const std::vector<std::string>& ids, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += sep;
        out += ids[i];
    }
    return out;
}

std::string template_classification_listing(const std::vector<std::string>& nf_ids) {
    if (nf_ids.empty()) return "No non-functional requirements identified.";
    std::string out;
    for (std::size_t i = 0; i < nf_ids.size(); ++i) {
        if (i) out.push_back(' ');
        out += "(ID=" + nf_ids[i] + ")";
    }
    return out;
}

std::string template_trace_listing(const std::vector<std::string>& ids) {
    if (ids.empty()) return "ID list: (none)";
    return "ID list: " + join_ids(ids, "; ");
}

} // namespace

RawResponse complete(ChatBackend& backend, const RenderedPrompt& prompt,
                     const ModelConfig& config, const FollowUpPolicy& policy, int repetition) {
    RawResponse out;
    out.turns.push_back(ChatTurn{"user", prompt.text});
    int followups = 0;
    for (;;) {
        ChatRequest request;
        request.prompt = prompt;
        request.config = config;
        request.repetition = repetition;
        request.turns = out.turns;
        const SendResult result = backend.send(request);
        out.turns.push_back(ChatTurn{"assistant", result.text});
        out.text = result.text;
        out.latency += result.latency;
        out.truncated = result.truncated;
        const bool answered = !policy.has_answer || policy.has_answer(result.text);
        if (answered || !looks_interrogative(result.text) || followups >= policy.max_followups) {
            break;
        }
        out.turns.push_back(ChatTurn{"user", policy.followup_text});
        ++followups;
    }
    return out;
}

std::string fixture_key(const RenderedPrompt& prompt, double temperature, int repetition) {
    std::string material = to_string(prompt.task);
    material += '|';
    material += pattern_key(prompt.pattern);
    material += '|';
    material += canonical_temperature(temperature);
    material += '|';
    material += prompt.document;
    material += '|';
    material += join_ids(prompt.payload_ids, ",");
    material += '|';
    material += std::to_string(repetition);
    return to_hex(fnv1a64(material));
}

// ---------------------------------------------------------------------------
// Live HTTP backend

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {}

SendResult HttpChatBackend::send(const ChatRequest& request) {
    // Split "scheme://host[:port]/path" into client base and path.
    const std::size_t scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        throw BackendError("endpoint must include a scheme: " + endpoint_);
    }
    const std::size_t path_start = endpoint_.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    const std::string path = path_start == std::string::npos
                                 ? std::string("/v1/chat/completions")
                                 : endpoint_.substr(path_start);

    json body;
    body["model"] = request.config.model_name;
    body["temperature"] = request.config.temperature;
    body["max_tokens"] = request.config.max_output_tokens;
    json messages = json::array();
    for (const ChatTurn& turn : request.turns) {
        messages.push_back({{"role", turn.role}, {"content", turn.text}});
    }
    body["messages"] = messages;
    const std::string payload = body.dump();

    auto log = [&](const std::string& line) {
        if (log_) log_(line);
    };

    const int attempts = 1 + std::max(0, request.config.max_retries);
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        log("POST " + endpoint_ + " attempt " + std::to_string(attempt) + "/" +
            std::to_string(attempts) + " body=" + payload);
        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
                                          request.config.request_timeout)
                                          .count(),
                                      0);
        client.set_read_timeout(
            std::chrono::duration_cast<std::chrono::seconds>(request.config.request_timeout)
                .count(),
            0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        const auto start = std::chrono::steady_clock::now();
        httplib::Result res = client.Post(path, headers, payload, "application/json");
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);

        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        } else {
            log("response status=200 body=" + res->body);
            try {
                const json reply = json::parse(res->body);
                const json& choice = reply.at("choices").at(0);
                SendResult out;
                out.text = choice.at("message").at("content").get<std::string>();
                out.latency = elapsed;
                out.truncated = choice.value("finish_reason", "") == "length";
                return out;
            } catch (const json::exception& e) {
                last_error = std::string("malformed response body: ") + e.what();
            }
        }
        log("attempt " + std::to_string(attempt) + " failed: " + last_error);
        if (attempt < attempts) {
            std::this_thread::sleep_for(backoff_base_ * (1LL << (attempt - 1)));
        }
    }
    throw BackendError("request failed after " + std::to_string(attempts) +
                       " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// Replay / recording backends

SendResult ReplayBackend::send(const ChatRequest& request) {
    const std::string key =
        fixture_key(request.prompt, request.config.temperature, request.repetition);
    const std::filesystem::path file = dir_ / (key + ".json");
    std::ifstream in(file);
    if (!in) {
        throw BackendError("fixture miss: " + file.string());
    }
    json fixture;
    try {
        in >> fixture;
    } catch (const json::exception& e) {
        throw BackendError("unreadable fixture " + file.string() + ": " + e.what());
    }
    const auto& responses = fixture.at("responses");
    const int index = assistant_turns(request.turns);
    if (index >= static_cast<int>(responses.size())) {
        throw BackendError("fixture " + key + " has no response for turn " +
                           std::to_string(index));
    }
    SendResult out;
    out.text = responses.at(index).at("text").get<std::string>();
    out.truncated = responses.at(index).value("truncated", false);
    out.latency = std::chrono::milliseconds(responses.at(index).value("latency_ms", 0));
    return out;
}

SendResult RecordingBackend::send(const ChatRequest& request) {
    const SendResult result = inner_.send(request);
    const std::string key =
        fixture_key(request.prompt, request.config.temperature, request.repetition);
    std::lock_guard<std::mutex> lock(mutex_);
    std::filesystem::create_directories(dir_);
    const std::filesystem::path file = dir_ / (key + ".json");
    json fixture;
    if (std::ifstream in(file); in) {
        in >> fixture;
    } else {
        fixture["key"] = key;
        fixture["task"] = to_string(request.prompt.task);
        fixture["pattern"] = pattern_key(request.prompt.pattern);
        fixture["temperature"] = request.config.temperature;
        fixture["document"] = request.prompt.document;
        fixture["payload_ids"] = request.prompt.payload_ids;
        fixture["repetition"] = request.repetition;
        fixture["responses"] = json::array();
    }
    fixture["responses"].push_back({{"text", result.text},
                                    {"truncated", result.truncated},
                                    {"latency_ms", 0}});
    std::ofstream out(file);
    out << fixture.dump(2) << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// Oracle backends

namespace {

class OracleBackend : public ChatBackend {
public:
    OracleBackend(OracleData data, OracleMode mode) : data_(std::move(data)), mode_(mode) {}

    SendResult send(const ChatRequest& request) override {
        const RenderedPrompt& prompt = request.prompt;
        SendResult out;
        if (prompt.task == TaskKind::BinaryClassification) {
            std::vector<std::string> listed;
            for (const std::string& id : prompt.payload_ids) {
                const auto it = data_.labels.find(id);
                if (it == data_.labels.end()) {
                    throw BackendError("oracle has no label for id " + id);
                }
                const bool is_nf = it->second == ReqClass::NF;
                if ((mode_ == OracleMode::Perfect && is_nf) ||
                    (mode_ == OracleMode::Inverted && !is_nf)) {
                    listed.push_back(id);
                }
            }
            if (mode_ == OracleMode::Empty) listed.clear();
            out.text = template_classification_listing(listed);
        } else {
            const auto doc_it = data_.docs.find(prompt.document);
            if (doc_it == data_.docs.end()) {
                throw BackendError("oracle has no document named \"" + prompt.document + "\"");
            }
            const OracleData::Doc& doc = doc_it->second;
            const std::string& query = prompt.payload_ids.at(0);
            std::set<std::string> truth;
            if (const auto it = doc.links.find(query); it != doc.links.end()) truth = it->second;
            std::vector<std::string> listed;
            switch (mode_) {
            case OracleMode::Perfect:
                listed.assign(truth.begin(), truth.end());
                break;
            case OracleMode::Empty:
                break;
            case OracleMode::Inverted:
                for (const std::string& id : doc.ids) {
                    if (id != query && !truth.count(id)) listed.push_back(id);
                }
                break;
            }
            out.text = template_trace_listing(listed);
        }
        return out;
    }

    std::string kind() const override {
        switch (mode_) {
        case OracleMode::Perfect: return "oracle:perfect";
        case OracleMode::Empty: return "oracle:empty";
        case OracleMode::Inverted: return "oracle:inverted";
        }
        return "oracle";
    }

private:
    OracleData data_;
    OracleMode mode_;
};

} // namespace

std::unique_ptr<ChatBackend> make_oracle_backend(OracleData data, OracleMode mode) {
    return std::make_unique<OracleBackend>(std::move(data), mode);
}

// ---------------------------------------------------------------------------
// Simulated model

SendResult SimulatedModelBackend::send(const ChatRequest& request) {
    const RenderedPrompt& prompt = request.prompt;
    const std::string key = fixture_key(prompt, request.config.temperature, request.repetition);
    const int turn = assistant_turns(request.turns);
    Rng rng(derive_seed(fnv1a64(key), {static_cast<std::uint64_t>(turn)}));
    const double temp = request.config.temperature;

    const bool asks_questions = prompt.pattern == PromptPattern::QuestionRefinement ||
                                prompt.pattern == PromptPattern::CognitiveVerifier;
    SendResult out;
    if (turn == 0 && asks_questions && rng.unit() < 0.25) {
        out.text = prompt.pattern == PromptPattern::QuestionRefinement
                       ? "Would you like me to rephrase the task so that each item is judged "
                         "against a stricter behavioural criterion?"
                       : "Before I combine the subtask outputs, could you confirm whether "
                         "every statement describes the same system?";
        return out;
    }

    if (prompt.task == TaskKind::BinaryClassification) {
        const double flip = 0.02 + 0.10 * temp;
        std::vector<std::string> nf_ids;
        std::vector<std::pair<std::string, ReqClass>> predicted;
        for (const std::string& id : prompt.payload_ids) {
            const auto it = data_.labels.find(id);
            if (it == data_.labels.end()) {
                throw BackendError("simulated model has no label for id " + id);
            }
            ReqClass cls = it->second;
            if (rng.unit() < flip) cls = cls == ReqClass::F ? ReqClass::NF : ReqClass::F;
            predicted.emplace_back(id, cls);
            if (cls == ReqClass::NF) nf_ids.push_back(id);
        }
        switch (prompt.pattern) {
        case PromptPattern::Template:
            out.text = template_classification_listing(nf_ids);
            break;
        case PromptPattern::ContextManager: {
            std::string body = "Reasoning: statements that describe observable behaviour were "
                               "treated as functional; quality constraints were not.\n\n";
            for (const auto& [id, cls] : predicted) {
                body += id + ": " + to_string(cls) + "\n";
            }
            body += "\nLimitations: short statements offer little context.";
            out.text = body;
            break;
        }
        default: {
            std::string body = "Classification results:\n";
            for (const auto& [id, cls] : predicted) {
                body += id + " - " + to_string(cls) + "\n";
            }
            out.text = body;
            break;
        }
        }
    } else {
        const auto doc_it = data_.docs.find(prompt.document);
        if (doc_it == data_.docs.end()) {
            throw BackendError("simulated model has no document named \"" + prompt.document +
                               "\"");
        }
        const OracleData::Doc& doc = doc_it->second;
        const std::string& query = prompt.payload_ids.at(0);
        std::set<std::string> truth;
        if (const auto it = doc.links.find(query); it != doc.links.end()) truth = it->second;
        const double drop = 0.05 + 0.15 * temp;
        const double add = 0.02 + 0.05 * temp;
        std::vector<std::string> listed;
        for (const std::string& id : doc.ids) {
            if (id == query) continue;
            const bool linked = truth.count(id) > 0;
            const double u = rng.unit();
            if ((linked && u >= drop) || (!linked && u < add)) listed.push_back(id);
        }
        if (prompt.pattern == PromptPattern::Template) {
            out.text = template_trace_listing(listed);
        } else if (listed.empty()) {
            out.text = "No related requirements were identified for this feature.";
        } else {
            out.text = "The following requirements are related: " + join_ids(listed, ", ") + ".";
        }
    }
    return out;
}

} // namespace ppbench
