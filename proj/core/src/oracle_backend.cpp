#include "arbgraph/oracle_backend.hpp"

#include "arbgraph/error.hpp"

namespace arbgraph {

TextPair text_pair(std::string x, std::string y) {
    if (y < x) std::swap(x, y);
    return {std::move(x), std::move(y)};
}

void OracleTable::add_relation(const std::string& x, const std::string& y, Relation r, double confidence) {
    relations[text_pair(x, y)] = RelationVerdict{r, confidence};
}

void OracleTable::add_fixed_arbitration(const std::string& x, const std::string& y, const std::string& winner,
                                        double confidence) {
    if (winner != x && winner != y) throw DataError("arbitration winner '" + winner + "' is not in the pair");
    arbitrations[text_pair(x, y)] = ArbitrationRule{ArbitrationMode::Fixed, winner, confidence, false};
}

void OracleTable::add_context_arbitration(const std::string& x, const std::string& y, bool invert) {
    arbitrations[text_pair(x, y)] = ArbitrationRule{ArbitrationMode::ContextMajority, {}, 0.0, invert};
}

Json to_json(const OracleTable& table) {
    Json j;
    Json extraction = Json::object();
    for (const auto& [doc, rules] : table.extraction) {
        Json arr = Json::array();
        for (const auto& r : rules) arr.push_back(Json{{"text", r.text}, {"entities", r.entities}});
        extraction[doc] = std::move(arr);
    }
    j["extraction"] = std::move(extraction);

    Json relations = Json::array();
    for (const auto& [pair, v] : table.relations) {
        relations.push_back(Json{{"a", pair.first},
                                 {"b", pair.second},
                                 {"relation", to_string(v.relation)},
                                 {"confidence", v.confidence}});
    }
    j["relations"] = std::move(relations);

    Json arbitrations = Json::array();
    for (const auto& [pair, rule] : table.arbitrations) {
        Json r{{"a", pair.first}, {"b", pair.second}};
        if (rule.mode == ArbitrationMode::Fixed) {
            r["mode"] = "fixed";
            r["winner"] = rule.winner;
            r["confidence"] = rule.confidence;
        } else {
            r["mode"] = "context";
        }
        r["invert"] = rule.invert;
        arbitrations.push_back(std::move(r));
    }
    j["arbitrations"] = std::move(arbitrations);

    Json embeddings = Json::object();
    for (const auto& [text, v] : table.embeddings) embeddings[text] = v;
    j["embeddings"] = std::move(embeddings);
    j["default_arbitration"] = table.context_majority_default ? "context" : "abstain";
    return j;
}

OracleTable oracle_table_from_json(const Json& j) {
    try {
        OracleTable t;
        if (j.contains("extraction")) {
            for (const auto& [doc, rules] : j.at("extraction").items()) {
                auto& out = t.extraction[doc];
                for (const auto& r : rules) {
                    out.push_back(ExtractionRule{r.at("text").get<std::string>(),
                                                 r.value("entities", std::vector<std::string>{})});
                }
            }
        }
        if (j.contains("relations")) {
            for (const auto& r : j.at("relations")) {
                const double conf = r.at("confidence").get<double>();
                if (conf < 0.0 || conf > 1.0) throw DataError("relation confidence outside [0, 1]");
                t.add_relation(r.at("a").get<std::string>(), r.at("b").get<std::string>(),
                               relation_from_string(r.at("relation").get<std::string>()), conf);
            }
        }
        if (j.contains("arbitrations")) {
            for (const auto& r : j.at("arbitrations")) {
                const auto a = r.at("a").get<std::string>();
                const auto b = r.at("b").get<std::string>();
                const auto mode = r.value("mode", std::string("fixed"));
                if (mode == "fixed") {
                    t.add_fixed_arbitration(a, b, r.at("winner").get<std::string>(),
                                            r.at("confidence").get<double>());
                } else if (mode == "context") {
                    t.add_context_arbitration(a, b, false);
                } else {
                    throw DataError("unknown arbitration mode '" + mode + "'");
                }
                t.arbitrations[text_pair(a, b)].invert = r.value("invert", false);
            }
        }
        if (j.contains("embeddings")) {
            for (const auto& [text, v] : j.at("embeddings").items()) {
                t.embeddings[text] = v.get<Embedding>();
            }
        }
        const auto def = j.value("default_arbitration", std::string("abstain"));
        if (def != "abstain" && def != "context") throw DataError("unknown default_arbitration '" + def + "'");
        t.context_majority_default = def == "context";
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed oracle table: ") + e.what());
    }
}

OracleBackend::OracleBackend(OracleTable table) : table_(std::move(table)) {
    for (auto& [text, v] : table_.embeddings) v = normalized(std::move(v));
}

std::vector<AtomicClaim> OracleBackend::extract_claims(const Document& doc) const {
    auto it = table_.extraction.find(doc.id);
    if (it == table_.extraction.end()) {
        throw BackendError("oracle has no extraction rule for document '" + doc.id + "'", "extract");
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> extracted;
    for (const auto& rule : it->second) extracted.emplace_back(rule.text, rule.entities);
    return make_claims(doc, std::move(extracted));
}

std::vector<Embedding> OracleBackend::embed(std::span<const std::string> texts) const {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        auto it = table_.embeddings.find(text);
        if (it == table_.embeddings.end()) throw BackendError("oracle has no embedding for '" + text + "'", "embed");
        if (!out.empty() && out.front().size() != it->second.size()) {
            throw BackendError("oracle embedding dimension mismatch for '" + text + "'", "embed");
        }
        out.push_back(it->second);
    }
    return out;
}

RelationVerdict OracleBackend::lookup_relation(const std::string& x, const std::string& y) const {
    if (x == y) return RelationVerdict{Relation::Support, 1.0};
    auto it = table_.relations.find(text_pair(x, y));
    return it == table_.relations.end() ? RelationVerdict{} : it->second;
}

RelationVerdict OracleBackend::verify_relation(const ClaimNode& x, const ClaimNode& y) const {
    return lookup_relation(x.canonical_text, y.canonical_text);
}

ArbitrationVerdict OracleBackend::context_majority(const ClaimNode& x, const ClaimNode& y,
                                                   std::span<const ClaimNode> context, bool invert,
                                                   double tau_gate) const {
    int for_x = 0;
    int for_y = 0;
    for (const auto& c : rank_context(context)) {
        if (c.id == x.id || c.id == y.id) continue;
        if (lookup_relation(c.canonical_text, x.canonical_text).relation == Relation::Support) ++for_x;
        if (lookup_relation(c.canonical_text, y.canonical_text).relation == Relation::Support) ++for_y;
    }
    if (for_x == for_y) return abstain(x.id, y.id);
    const double confidence = 0.5 + 0.5 * std::abs(for_x - for_y) / static_cast<double>(for_x + for_y);
    const bool x_wins = (for_x > for_y) != invert;
    return x_wins ? gated_verdict(x.id, y.id, confidence, tau_gate) : gated_verdict(y.id, x.id, confidence, tau_gate);
}

ArbitrationVerdict OracleBackend::arbitrate(const ClaimNode& x, const ClaimNode& y,
                                            std::span<const ClaimNode> context, double tau_gate) const {
    auto it = table_.arbitrations.find(text_pair(x.canonical_text, y.canonical_text));
    if (it == table_.arbitrations.end()) {
        if (table_.context_majority_default) return context_majority(x, y, context, false, tau_gate);
        return abstain(x.id, y.id);
    }
    const auto& rule = it->second;
    if (rule.mode == ArbitrationMode::ContextMajority) return context_majority(x, y, context, rule.invert, tau_gate);
    const bool x_wins = (rule.winner == x.canonical_text) != rule.invert;
    return x_wins ? gated_verdict(x.id, y.id, rule.confidence, tau_gate)
                  : gated_verdict(y.id, x.id, rule.confidence, tau_gate);
}

}  // namespace arbgraph
