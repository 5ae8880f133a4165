#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arbgraph/model.hpp"

namespace arbgraph {

enum class Relation { Support, Contradiction, Neutral };

std::string to_string(Relation r);
Relation relation_from_string(const std::string& s);

struct RelationVerdict {
    Relation relation = Relation::Neutral;
    double confidence = 0.0;

    friend bool operator==(const RelationVerdict&, const RelationVerdict&) = default;
};

struct ArbitrationVerdict {
    NodeId winner;
    NodeId loser;
    int gate_w = 0;  // 1 only when confidence >= tau_gate
    double confidence = 0.0;

    friend bool operator==(const ArbitrationVerdict&, const ArbitrationVerdict&) = default;
};

struct Document {
    std::string id;
    std::string text;
};

/// The four model-dependent pipeline steps. Implementations must be safe to
/// call from several threads at once; every method is logically const.
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::vector<AtomicClaim> extract_claims(const Document& doc) const = 0;
    // One unit vector per text; dimension is fixed for a given backend.
    virtual std::vector<Embedding> embed(std::span<const std::string> texts) const = 0;
    // Symmetric in its arguments. Neutral means "no edge".
    virtual RelationVerdict verify_relation(const ClaimNode& x, const ClaimNode& y) const = 0;
    // `context` is truncated to kMaxContextNodes by current probability.
    virtual ArbitrationVerdict arbitrate(const ClaimNode& x, const ClaimNode& y,
                                         std::span<const ClaimNode> context,
                                         double tau_gate) const = 0;
};

// Lowercases and collapses internal whitespace.
std::string normalize_entity(const std::string& raw);

// Builds AtomicClaims with ids "<doc>#<index>" in extraction order.
std::vector<AtomicClaim> make_claims(const Document& doc,
                                     std::vector<std::pair<std::string, std::vector<std::string>>> extracted);

// Applies the confidence gate. Confidence is clamped to [0, 1].
ArbitrationVerdict gated_verdict(NodeId winner, NodeId loser, double confidence, double tau_gate);

// Abstention: gate closed, x reported as nominal winner.
ArbitrationVerdict abstain(NodeId x, NodeId y);

// Orders by probability descending (ties by id) and keeps the first
// kMaxContextNodes entries.
std::vector<ClaimNode> rank_context(std::span<const ClaimNode> context);

}  // namespace arbgraph
