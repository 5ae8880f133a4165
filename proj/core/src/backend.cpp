#include "arbgraph/backend.hpp"

#include <algorithm>
#include <cctype>

#include "arbgraph/error.hpp"

namespace arbgraph {

std::string to_string(Relation r) {
    switch (r) {
    case Relation::Support: return "support";
    case Relation::Contradiction: return "contradiction";
    case Relation::Neutral: return "neutral";
    }
    return "neutral";
}

Relation relation_from_string(const std::string& s) {
    std::string lower;
    for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "support") return Relation::Support;
    if (lower == "contradiction") return Relation::Contradiction;
    if (lower == "neutral") return Relation::Neutral;
    throw DataError("unknown relation '" + s + "'");
}

std::string normalize_entity(const std::string& raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<AtomicClaim> make_claims(const Document& doc,
                                     std::vector<std::pair<std::string, std::vector<std::string>>> extracted) {
    std::vector<AtomicClaim> out;
    out.reserve(extracted.size());
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        auto& [text, entities] = extracted[i];
        if (text.empty()) throw BackendError("empty claim text extracted from '" + doc.id + "'", "extract");
        AtomicClaim c;
        c.id = doc.id + "#" + std::to_string(i);
        c.text = std::move(text);
        c.source_doc = doc.id;
        for (const auto& e : entities) {
            auto n = normalize_entity(e);
            if (!n.empty()) c.entities.insert(std::move(n));
        }
        out.push_back(std::move(c));
    }
    return out;
}

ArbitrationVerdict gated_verdict(NodeId winner, NodeId loser, double confidence, double tau_gate) {
    confidence = std::clamp(confidence, 0.0, 1.0);
    return ArbitrationVerdict{winner, loser, confidence >= tau_gate ? 1 : 0, confidence};
}

ArbitrationVerdict abstain(NodeId x, NodeId y) { return ArbitrationVerdict{x, y, 0, 0.0}; }

std::vector<ClaimNode> rank_context(std::span<const ClaimNode> context) {
    std::vector<ClaimNode> ranked(context.begin(), context.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const ClaimNode& l, const ClaimNode& r) {
        if (l.logit != r.logit) return l.logit > r.logit;
        return l.id < r.id;
    });
    if (ranked.size() > kMaxContextNodes) ranked.resize(kMaxContextNodes);
    return ranked;
}

}  // namespace arbgraph
