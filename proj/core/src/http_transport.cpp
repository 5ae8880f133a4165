#include <cstdlib>

#include <httplib.h>

#include "arbgraph/error.hpp"
#include "arbgraph/remote_backend.hpp"

namespace arbgraph {

namespace {

struct ParsedEndpoint {
    std::string origin;    // scheme://host[:port]
    std::string base_path; // e.g. "/v1", no trailing slash
};

ParsedEndpoint parse_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw BackendError("endpoint '" + url + "' has no scheme");
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedEndpoint out;
    out.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) out.base_path = url.substr(path_start);
    while (!out.base_path.empty() && out.base_path.back() == '/') out.base_path.pop_back();
    return out;
}

class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(const RemoteConfig& cfg) : endpoint_(parse_endpoint(cfg.endpoint)), cfg_(cfg) {
        if (!cfg.api_key_env.empty()) {
            if (const char* key = std::getenv(cfg.api_key_env.c_str())) api_key_ = key;
        }
    }

    std::string post_json(const std::string& path, const std::string& body) const override {
        // httplib::Client is not thread-safe; one per request keeps calls independent.
        httplib::Client client(endpoint_.origin);
        client.set_connection_timeout(cfg_.timeout_seconds);
        client.set_read_timeout(cfg_.timeout_seconds);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(endpoint_.base_path + path, headers, body, "application/json");
        if (!res) {
            throw BackendError("request to " + endpoint_.origin + endpoint_.base_path + path +
                               " failed: " + httplib::to_string(res.error()));
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError("HTTP " + std::to_string(res->status) + " from " + endpoint_.base_path + path);
        }
        return res->body;
    }

private:
    ParsedEndpoint endpoint_;
    RemoteConfig cfg_;
    std::string api_key_;
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(const RemoteConfig& cfg) {
    if (cfg.endpoint.empty()) throw BackendError("remote backend requires an endpoint URL");
    return std::make_shared<HttplibTransport>(cfg);
}

}  // namespace arbgraph
