#pragma once

#include <climits>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arbgraph/backend.hpp"
#include "arbgraph/model.hpp"
#include "arbgraph/serialization.hpp"

namespace arbgraph {

// Probabilities within this distance of a threshold compare equal to it, so
// that sigmoid(logit(t)) rounding cannot flip a boundary decision.
inline constexpr double kThresholdSlack = 1e-12;

/// (p_i + p_j) / (1 + |p_i - p_j|)
double intensity(double p_i, double p_j);

struct ActivePair {
    NodeId a;  // a < b
    NodeId b;
    double p_a = 0.0;
    double p_b = 0.0;
    double intensity = 0.0;

    double gap() const;
};

/// Contradiction edges whose endpoints both have p > tau_accept and whose
/// decisive-arbitration count is below per_pair_cap. Sorted by intensity
/// descending, then (a, b).
std::vector<ActivePair> mine_active(const EvidenceGraph& graph, double tau_accept, int per_pair_cap = INT_MAX);

/// First min(k, |active|) pairs under the policy ordering, ties by (a, b).
std::vector<ActivePair> select_top_k(std::span<const ActivePair> active, int k, SchedulingPolicy policy);

/// Support neighbours of a and b (endpoints excluded, deduplicated), ranked
/// by probability descending and capped at kMaxContextNodes.
std::vector<ClaimNode> supporting_context(const EvidenceGraph& graph, NodeId a, NodeId b);

struct LogitUpdate {
    NodeId node;
    double old_logit = 0.0;
    double new_logit = 0.0;
};

/// Symmetric +-eta update when gate_w = 1; no-op otherwise. Returns the
/// applied logit changes (empty on abstention).
std::vector<LogitUpdate> apply_update(EvidenceGraph& graph, const ArbitrationVerdict& verdict, double eta);

struct PairDecision {
    ActivePair pair;
    std::vector<NodeId> context;
    ArbitrationVerdict verdict;
    std::vector<LogitUpdate> updates;
};

struct RoundRecord {
    int round = 0;
    std::vector<ActivePair> mined;
    std::vector<ActivePair> selected;
    std::vector<PairDecision> decisions;
};

struct ArbitrationTrace {
    double eta = 0.0;
    SchedulingPolicy policy = SchedulingPolicy::ConflictAware;
    std::vector<RoundRecord> rounds;
    // True when no active conflict remains; false when the round budget ran
    // out with conflicts still active.
    bool converged = false;

    std::size_t arbitration_calls() const;
    std::size_t decisive_updates() const;
};

struct ArbitrationResult {
    EvidenceGraph graph;
    ArbitrationTrace trace;
};

/// Iterative credibility arbitration. Each round snapshots probabilities,
/// mines and schedules active conflicts, fetches verdicts against the
/// snapshot (up to `parallelism` at once) and applies them in selection
/// order. Stops early once no conflict is active.
ArbitrationResult run_arbitration(EvidenceGraph graph, const Backend& backend, const PipelineConfig& cfg,
                                  SchedulingPolicy policy, std::size_t parallelism = 1);
ArbitrationResult run_arbitration(EvidenceGraph graph, const Backend& backend, const PipelineConfig& cfg);

/// Re-applies every recorded verdict to `initial`. Throws DataError if a
/// recorded old logit disagrees with the replayed state.
EvidenceGraph replay_trace(EvidenceGraph initial, const ArbitrationTrace& trace);

/// Nodes with sigmoid(logit) >= tau_accept, by probability descending then id.
std::vector<ClaimNode> validated_set(const EvidenceGraph& graph, double tau_accept);

inline constexpr const char* kContextHeader = "# validated evidence";
inline constexpr const char* kNoEvidenceMarker = "NO_VALIDATED_EVIDENCE";

/// Numbered list "<i>. [<id>] <text> (p=<p>; sources: <docs>)" in the
/// given order, under kContextHeader. Extra header lines are emitted as
/// "# " comments.
std::string assemble_context(std::span<const ClaimNode> validated, std::span<const std::string> header_lines = {});

/// Node ids listed in an assembled context, in order.
std::vector<NodeId> parse_context_ids(const std::string& context);

Json to_json(const ArbitrationTrace& trace);
ArbitrationTrace trace_from_json(const Json& j);

}  // namespace arbgraph
