#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace arbgraph {

using Embedding = std::vector<double>;
using EntitySet = std::set<std::string>;

struct NodeId {
    std::uint32_t value = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId id);
// Inverse of to_string: "n<digits>". Throws DataError otherwise.
NodeId node_id_from_string(const std::string& s);

/// One self-contained factual assertion pulled out of a single document.
struct AtomicClaim {
    std::string id;
    std::string text;
    std::string source_doc;
    EntitySet entities;
    std::optional<Embedding> embedding;
};

/// A canonical claim: one or more merged AtomicClaims plus the credibility
/// logit that arbitration moves around.
struct ClaimNode {
    NodeId id;
    std::string canonical_text;
    std::vector<std::string> members;
    std::set<std::string> sources;
    EntitySet entities;
    double logit = 0.0;
    // Embedding of the cluster seed (first member). Not serialized.
    Embedding embedding;
    // Opposing node -> number of decisive (gate_w = 1) arbitrations so far.
    std::map<NodeId, int> resolved_pairs;

    double probability() const;
};

enum class EdgeKind { Support, Contradiction };

std::string to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(const std::string& s);

/// Undirected typed edge; endpoints are stored with a < b.
struct Edge {
    NodeId a;
    NodeId b;
    EdgeKind kind = EdgeKind::Support;
    double confidence = 0.0;
    double similarity = 0.0;
};

struct EvidenceGraph {
    std::string query;
    std::map<NodeId, ClaimNode> nodes;
    std::vector<Edge> support_edges;        // sorted by (a, b)
    std::vector<Edge> contradiction_edges;  // sorted by (a, b)

    const ClaimNode& node(NodeId id) const;
    ClaimNode& node(NodeId id);
    bool has_contradiction(NodeId a, NodeId b) const;
    // Support neighbours of `id` in ascending id order.
    std::vector<NodeId> support_neighbors(NodeId id) const;
    double logit_sum() const;
};

enum class SchedulingPolicy { ConflictAware, HardFirst, EasyFirst };

std::string to_string(SchedulingPolicy policy);
SchedulingPolicy policy_from_string(const std::string& s);

enum class SupportPruning { Global, PerNode };

std::string to_string(SupportPruning mode);
SupportPruning support_pruning_from_string(const std::string& s);

struct PipelineConfig {
    double tau_q = 0.3;
    double tau_sim = 0.6;
    double tau_conf = 0.7;
    double tau_accept = 0.3;
    double tau_gate = 0.6;
    double tau_merge = 0.92;
    double eta = 0.8;
    int budget_k = 3;
    int max_support_edges = 60;
    int rounds = 5;
    int per_pair_cap = 3;
    std::uint64_t seed = 0;
    SchedulingPolicy policy = SchedulingPolicy::ConflictAware;
    SupportPruning support_pruning = SupportPruning::Global;

    // Throws ConfigError naming the first offending key.
    void validate() const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Upper bound on supporting-context nodes handed to an arbitrator.
inline constexpr std::size_t kMaxContextNodes = 8;

/// log(p / (1 - p)). Throws std::domain_error outside (0, 1).
double logit(double p);

/// 1 / (1 + exp(-s)), evaluated without overflow for large |s|.
double sigmoid(double s);

double dot(std::span<const double> x, std::span<const double> y);
double cosine(std::span<const double> x, std::span<const double> y);

// Scales `v` to unit Euclidean norm. Throws DataError on a zero vector.
Embedding normalized(Embedding v);

/// Greedy duplicate merging. A claim joins the first existing cluster whose
/// seed has an identical entity set and cosine >= tau_merge; otherwise it
/// seeds a new cluster. Claims are visited in pool order and node ids are
/// assigned in order of first appearance.
std::vector<ClaimNode> normalize_claims(std::span<const AtomicClaim> pool,
                                        const PipelineConfig& cfg);

/// Source-count corroboration prior: min(0.9, 0.5 + 0.1 * (|sources| - 1)).
double initial_credibility(const ClaimNode& node);

}  // namespace arbgraph
