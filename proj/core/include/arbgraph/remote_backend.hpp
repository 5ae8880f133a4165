#pragma once

#include <atomic>
#include <memory>
#include <semaphore>
#include <string>

#include "arbgraph/backend.hpp"
#include "arbgraph/serialization.hpp"

namespace arbgraph {

struct RemoteConfig {
    // Base URL of an OpenAI-compatible API, e.g. "http://localhost:8000/v1".
    std::string endpoint;
    // Name of the environment variable holding the bearer token. Empty means
    // no Authorization header.
    std::string api_key_env = "ARBGRAPH_API_KEY";
    std::string chat_model = "gpt-4o-mini";
    std::string embedding_model = "text-embedding-3-small";
    int max_in_flight = 4;
    int max_retries = 2;
    int timeout_seconds = 60;
    // When false, verifier and arbitrator failures are raised instead of
    // being mapped to Neutral / abstain.
    bool fail_closed = true;
};

/// POSTs a JSON body to `path` (relative to the endpoint base path) and
/// returns the response body. Throws BackendError on transport or HTTP errors.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual std::string post_json(const std::string& path, const std::string& body) const = 0;
};

std::shared_ptr<HttpTransport> make_http_transport(const RemoteConfig& cfg);

// Prompt texts. Kept public so tests and docs can pin them.
namespace prompts {
extern const char* const kExtractionSystem;
extern const char* const kRelationSystem;
extern const char* const kArbitrationSystem;
}  // namespace prompts

/// Chat-completion request bodies (temperature 0) for each step.
Json extraction_request(const std::string& model, const Document& doc);
Json relation_request(const std::string& model, const std::string& first, const std::string& second);
Json arbitration_request(const std::string& model, const std::string& first, const std::string& second,
                         std::span<const ClaimNode> context);

// Strips an optional ``` fence and parses the assistant message content.
Json parse_message_json(const std::string& content);

class RemoteBackend final : public Backend {
public:
    RemoteBackend(RemoteConfig cfg, std::shared_ptr<HttpTransport> transport);

    std::vector<AtomicClaim> extract_claims(const Document& doc) const override;
    std::vector<Embedding> embed(std::span<const std::string> texts) const override;
    RelationVerdict verify_relation(const ClaimNode& x, const ClaimNode& y) const override;
    ArbitrationVerdict arbitrate(const ClaimNode& x, const ClaimNode& y, std::span<const ClaimNode> context,
                                 double tau_gate) const override;

private:
    // Sends a chat request and returns the parsed JSON payload of the reply,
    // retrying malformed replies up to max_retries times.
    template <typename Parse>
    auto chat(const Json& request, const char* stage, Parse parse) const;
    std::string post(const std::string& path, const Json& body) const;

    RemoteConfig cfg_;
    std::shared_ptr<HttpTransport> transport_;
    mutable std::counting_semaphore<1024> in_flight_;
    mutable std::atomic<std::size_t> dimension_{0};
};

}  // namespace arbgraph
