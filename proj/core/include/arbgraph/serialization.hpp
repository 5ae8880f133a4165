#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbgraph/model.hpp"

namespace arbgraph {

using Json = nlohmann::ordered_json;

/// The ingestion output: the query plus every extracted claim.
struct ClaimPool {
    std::string query;
    std::optional<Embedding> query_embedding;
    std::vector<AtomicClaim> claims;
};

Json to_json(const PipelineConfig& cfg);

// Applies the keys present in `j` on top of `base`. Unknown keys and type
// mismatches raise ConfigError naming the key; the result is validated.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});

Json to_json(const ClaimPool& pool);
ClaimPool pool_from_json(const Json& j);

Json to_json(const ClaimNode& node);
Json to_json(const Edge& edge);
Json to_json(const EvidenceGraph& graph);
EvidenceGraph graph_from_json(const Json& j);

/// Graphviz rendering: solid support edges, dashed contradiction edges,
/// node labels carry truncated canonical text and the current probability.
std::string to_dot(const EvidenceGraph& graph, const std::string& header_comment = {});

/// One row per edge: a,b,kind,confidence,similarity.
std::string edges_to_csv(const EvidenceGraph& graph);

// Pretty-printed with a trailing newline; stable across runs.
std::string dump(const Json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);
Json read_json_file(const std::filesystem::path& path);

}  // namespace arbgraph
