#include "arbgraph/remote_backend.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "arbgraph/error.hpp"

namespace arbgraph {

namespace prompts {

const char* const kExtractionSystem =
    "You decompose a document into atomic factual claims. Each claim must state exactly one "
    "independently verifiable fact and must be understandable without the document (resolve "
    "pronouns, keep dates and names). Do not add facts that are not in the document. "
    "Reply with a strict JSON array and nothing else: "
    "[{\"text\": \"<claim sentence>\", \"entities\": [\"<entity>\", ...]}]";

const char* const kRelationSystem =
    "You compare two factual claims. Decide whether claim A and claim B support each other, "
    "contradict each other, or are unrelated / compatible (neutral). Reply with strict JSON "
    "and nothing else: {\"relation\": \"support\" | \"contradiction\" | \"neutral\", "
    "\"confidence\": <number between 0 and 1>}";

const char* const kArbitrationSystem =
    "Two claims contradict each other. Using only the supporting evidence listed, decide which "
    "claim is more credible. Reply with strict JSON and nothing else: "
    "{\"winner\": \"A\" | \"B\", \"confidence\": <number between 0 and 1>}. Use a low "
    "confidence when the evidence does not settle the conflict.";

}  // namespace prompts

namespace {

Json chat_body(const std::string& model, const char* system, const std::string& user) {
    Json body;
    body["model"] = model;
    body["temperature"] = 0;
    body["messages"] = Json::array({Json{{"role", "system"}, {"content", system}},
                                    Json{{"role", "user"}, {"content", user}}});
    return body;
}

std::string message_content(const std::string& response_body) {
    const auto j = Json::parse(response_body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
}

double parse_confidence(const Json& j) {
    const double c = j.at("confidence").get<double>();
    if (!std::isfinite(c) || c < 0.0 || c > 1.0) throw DataError("confidence outside [0, 1]");
    return c;
}

}  // namespace

Json extraction_request(const std::string& model, const Document& doc) {
    return chat_body(model, prompts::kExtractionSystem, "Document:\n" + doc.text);
}

Json relation_request(const std::string& model, const std::string& first, const std::string& second) {
    return chat_body(model, prompts::kRelationSystem, "Claim A: " + first + "\nClaim B: " + second);
}

Json arbitration_request(const std::string& model, const std::string& first, const std::string& second,
                         std::span<const ClaimNode> context) {
    std::ostringstream user;
    user << "Claim A: " << first << "\nClaim B: " << second << "\nSupporting evidence:\n";
    const auto ranked = rank_context(context);
    if (ranked.empty()) user << "(none)\n";
    for (const auto& c : ranked) {
        user << "- " << c.canonical_text << " (credibility " << std::fixed << std::setprecision(2)
             << c.probability() << ")\n";
    }
    return chat_body(model, prompts::kArbitrationSystem, user.str());
}

Json parse_message_json(const std::string& content) {
    std::string text = content;
    const auto fence = text.find("```");
    if (fence != std::string::npos) {
        auto start = text.find('\n', fence);
        const auto end = text.rfind("```");
        if (start != std::string::npos && end > start) text = text.substr(start + 1, end - start - 1);
    }
    return Json::parse(text);
}

RemoteBackend::RemoteBackend(RemoteConfig cfg, std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)),
      in_flight_(std::clamp(cfg_.max_in_flight, 1, 1024)) {
    if (!transport_) throw BackendError("remote backend needs a transport");
}

std::string RemoteBackend::post(const std::string& path, const Json& body) const {
    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{in_flight_};
    return transport_->post_json(path, body.dump());
}

template <typename Parse>
auto RemoteBackend::chat(const Json& request, const char* stage, Parse parse) const {
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        try {
            return parse(parse_message_json(message_content(post("/chat/completions", request))));
        } catch (const nlohmann::json::exception& e) {
            last_error = e.what();
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    throw BackendError("giving up after " + std::to_string(cfg_.max_retries + 1) + " attempts: " + last_error,
                       stage);
}

std::vector<AtomicClaim> RemoteBackend::extract_claims(const Document& doc) const {
    if (doc.text.empty()) throw BackendError("document '" + doc.id + "' is empty", "extract");
    auto extracted = chat(extraction_request(cfg_.chat_model, doc), "extract", [](const Json& j) {
        std::vector<std::pair<std::string, std::vector<std::string>>> out;
        if (!j.is_array()) throw DataError("extraction reply is not a JSON array");
        for (const auto& c : j) {
            out.emplace_back(c.at("text").get<std::string>(), c.value("entities", std::vector<std::string>{}));
            if (out.back().first.empty()) throw DataError("empty claim text in extraction reply");
        }
        return out;
    });
    return make_claims(doc, std::move(extracted));
}

std::vector<Embedding> RemoteBackend::embed(std::span<const std::string> texts) const {
    if (texts.empty()) throw BackendError("embed called with no texts", "embed");
    Json body;
    body["model"] = cfg_.embedding_model;
    body["input"] = std::vector<std::string>(texts.begin(), texts.end());
    std::vector<Embedding> out;
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries && out.empty(); ++attempt) {
        try {
            const auto reply = Json::parse(post("/embeddings", body));
            std::vector<Embedding> parsed(texts.size());
            for (const auto& item : reply.at("data")) {
                const auto index = item.value("index", std::size_t{0});
                if (index >= parsed.size()) throw DataError("embedding index out of range");
                parsed[index] = normalized(item.at("embedding").get<Embedding>());
            }
            for (const auto& v : parsed) {
                if (v.empty()) throw DataError("embedding reply is missing an input");
            }
            out = std::move(parsed);
        } catch (const nlohmann::json::exception& e) {
            last_error = e.what();
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    if (out.empty()) {
        throw BackendError("giving up after " + std::to_string(cfg_.max_retries + 1) + " attempts: " + last_error,
                           "embed");
    }
    for (const auto& v : out) {
        std::size_t expected = 0;
        if (!dimension_.compare_exchange_strong(expected, v.size()) && expected != v.size()) {
            throw BackendError("embedding dimension changed from " + std::to_string(expected) + " to " +
                                   std::to_string(v.size()),
                               "embed");
        }
    }
    return out;
}

RelationVerdict RemoteBackend::verify_relation(const ClaimNode& x, const ClaimNode& y) const {
    const bool swap = y.canonical_text < x.canonical_text;
    const auto& first = swap ? y.canonical_text : x.canonical_text;
    const auto& second = swap ? x.canonical_text : y.canonical_text;
    try {
        return chat(relation_request(cfg_.chat_model, first, second), "verify", [](const Json& j) {
            return RelationVerdict{relation_from_string(j.at("relation").get<std::string>()), parse_confidence(j)};
        });
    } catch (const BackendError& e) {
        if (!cfg_.fail_closed) throw;
        std::clog << "warning: " << e.what() << "; treating pair as neutral\n";
        return RelationVerdict{};
    }
}

ArbitrationVerdict RemoteBackend::arbitrate(const ClaimNode& x, const ClaimNode& y,
                                            std::span<const ClaimNode> context, double tau_gate) const {
    const bool swap = y.canonical_text < x.canonical_text;
    const ClaimNode& first = swap ? y : x;
    const ClaimNode& second = swap ? x : y;
    try {
        return chat(arbitration_request(cfg_.chat_model, first.canonical_text, second.canonical_text, context),
                    "arbitrate", [&](const Json& j) {
                        const auto w = j.at("winner").get<std::string>();
                        if (w != "A" && w != "B") throw DataError("winner must be \"A\" or \"B\"");
                        const bool first_wins = w == "A";
                        return gated_verdict(first_wins ? first.id : second.id, first_wins ? second.id : first.id,
                                             parse_confidence(j), tau_gate);
                    });
    } catch (const BackendError& e) {
        if (!cfg_.fail_closed) throw;
        std::clog << "warning: " << e.what() << "; abstaining\n";
        return abstain(x.id, y.id);
    }
}

}  // namespace arbgraph
