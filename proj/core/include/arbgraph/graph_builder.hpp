#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arbgraph/backend.hpp"
#include "arbgraph/model.hpp"
#include "arbgraph/serialization.hpp"

namespace arbgraph {

struct CandidatePair {
    NodeId a;  // a < b
    NodeId b;
    double similarity = 0.0;
};

struct EdgeSets {
    std::vector<Edge> support;
    std::vector<Edge> contradiction;
};

struct BuildStats {
    std::size_t documents = 0;
    std::size_t claims = 0;
    std::size_t normalized_nodes = 0;
    std::size_t retained_nodes = 0;
    std::size_t candidate_pairs = 0;
    std::size_t verifier_calls = 0;
    std::size_t support_before_pruning = 0;
};

/// Keeps nodes with cosine(query, node) >= tau_q, preserving order.
std::vector<ClaimNode> filter_by_query(std::span<const double> query_embedding, std::span<const ClaimNode> nodes,
                                       double tau_q);

/// All unordered pairs with cosine >= tau_sim, sorted by (a, b).
std::vector<CandidatePair> mine_candidates(std::span<const ClaimNode> nodes, double tau_sim);

/// Verifies every candidate pair (concurrently, up to `parallelism` workers)
/// and instantiates an edge for non-Neutral verdicts with confidence >=
/// tau_conf. Edges come out in candidate order regardless of scheduling.
EdgeSets build_edges(std::span<const CandidatePair> pairs, std::span<const ClaimNode> nodes,
                     const Backend& verifier, double tau_conf, std::size_t parallelism = 1);

/// Global mode keeps the max_edges most similar support edges overall.
/// Per-node mode greedily keeps edges in similarity order while both
/// endpoints have fewer than max_edges kept edges. Ties go to (a, b)
/// ascending; the result is sorted by (a, b).
std::vector<Edge> prune_support(std::vector<Edge> support, int max_edges,
                                SupportPruning mode = SupportPruning::Global);

/// Graph construction from an already extracted and embedded claim pool:
/// normalize -> filter -> initial credibility -> mine -> verify -> prune.
EvidenceGraph build_graph_from_pool(const ClaimPool& pool, const Backend& backend, const PipelineConfig& cfg,
                                    BuildStats* stats = nullptr, std::size_t parallelism = 1);

/// Extraction plus embedding: documents -> claim pool with embeddings.
ClaimPool ingest_documents(const std::string& query, std::span<const Document> documents, const Backend& backend);

/// ingest_documents followed by build_graph_from_pool.
EvidenceGraph build_graph(const std::string& query, std::span<const Document> documents, const Backend& backend,
                          const PipelineConfig& cfg, BuildStats* stats = nullptr, std::size_t parallelism = 1);

}  // namespace arbgraph
