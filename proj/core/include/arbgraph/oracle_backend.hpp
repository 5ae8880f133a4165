#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arbgraph/backend.hpp"
#include "arbgraph/serialization.hpp"

namespace arbgraph {

struct ExtractionRule {
    std::string text;
    std::vector<std::string> entities;
};

enum class ArbitrationMode {
    Fixed,           // a named winner with a fixed confidence
    ContextMajority, // the side with more Support relations inside the context wins
};

struct ArbitrationRule {
    ArbitrationMode mode = ArbitrationMode::Fixed;
    std::string winner;  // Fixed only
    double confidence = 0.0;  // Fixed only
    bool invert = false;  // swap the winner the rule would otherwise return
};

// Text pairs are stored with the lexicographically smaller text first so
// lookups are order-independent.
using TextPair = std::pair<std::string, std::string>;
TextPair text_pair(std::string x, std::string y);

/// Deterministic lookup tables standing in for the LLM / encoder calls.
struct OracleTable {
    std::map<std::string, std::vector<ExtractionRule>> extraction;
    std::map<TextPair, RelationVerdict> relations;
    std::map<TextPair, ArbitrationRule> arbitrations;
    std::map<std::string, Embedding> embeddings;
    // What happens for a pair with no arbitration rule: abstain (false) or
    // fall back to context majority (true).
    bool context_majority_default = false;

    void add_relation(const std::string& x, const std::string& y, Relation r, double confidence);
    void add_fixed_arbitration(const std::string& x, const std::string& y, const std::string& winner,
                               double confidence);
    void add_context_arbitration(const std::string& x, const std::string& y, bool invert);
};

Json to_json(const OracleTable& table);
OracleTable oracle_table_from_json(const Json& j);

// Embeddings are scaled to unit length on construction.
class OracleBackend final : public Backend {
public:
    explicit OracleBackend(OracleTable table);

    const OracleTable& table() const noexcept { return table_; }

    std::vector<AtomicClaim> extract_claims(const Document& doc) const override;
    std::vector<Embedding> embed(std::span<const std::string> texts) const override;
    RelationVerdict verify_relation(const ClaimNode& x, const ClaimNode& y) const override;
    ArbitrationVerdict arbitrate(const ClaimNode& x, const ClaimNode& y, std::span<const ClaimNode> context,
                                 double tau_gate) const override;

private:
    RelationVerdict lookup_relation(const std::string& x, const std::string& y) const;
    ArbitrationVerdict context_majority(const ClaimNode& x, const ClaimNode& y,
                                        std::span<const ClaimNode> context, bool invert,
                                        double tau_gate) const;

    OracleTable table_;
};

}  // namespace arbgraph
