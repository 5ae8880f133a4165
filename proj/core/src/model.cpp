#include "arbgraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "arbgraph/error.hpp"

namespace arbgraph {

std::string to_string(NodeId id) { return "n" + std::to_string(id.value); }

NodeId node_id_from_string(const std::string& s) {
    const bool digits = s.size() >= 2 && s.size() <= 11 && s[0] == 'n' &&
                        std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!digits) throw DataError("malformed node id '" + s + "'");
    const auto v = std::stoull(s.substr(1));
    if (v > UINT32_MAX) throw DataError("node id out of range '" + s + "'");
    return NodeId{static_cast<std::uint32_t>(v)};
}

double ClaimNode::probability() const { return sigmoid(logit); }

std::string to_string(EdgeKind kind) {
    return kind == EdgeKind::Support ? "support" : "contradiction";
}

EdgeKind edge_kind_from_string(const std::string& s) {
    if (s == "support") return EdgeKind::Support;
    if (s == "contradiction") return EdgeKind::Contradiction;
    throw DataError("unknown edge kind '" + s + "'");
}

const ClaimNode& EvidenceGraph::node(NodeId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw DataError("unknown node id " + to_string(id));
    return it->second;
}

ClaimNode& EvidenceGraph::node(NodeId id) {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw DataError("unknown node id " + to_string(id));
    return it->second;
}

bool EvidenceGraph::has_contradiction(NodeId a, NodeId b) const {
    if (b < a) std::swap(a, b);
    auto it = std::lower_bound(contradiction_edges.begin(), contradiction_edges.end(), a,
                               [](const Edge& e, NodeId x) { return e.a < x; });
    for (; it != contradiction_edges.end() && it->a == a; ++it) {
        if (it->b == b) return true;
    }
    return false;
}

std::vector<NodeId> EvidenceGraph::support_neighbors(NodeId id) const {
    std::vector<NodeId> out;
    for (const auto& e : support_edges) {
        if (e.a == id) out.push_back(e.b);
        else if (e.b == id) out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double EvidenceGraph::logit_sum() const {
    double sum = 0.0;
    for (const auto& [id, n] : nodes) sum += n.logit;
    return sum;
}

std::string to_string(SchedulingPolicy policy) {
    switch (policy) {
    case SchedulingPolicy::ConflictAware: return "conflict-aware";
    case SchedulingPolicy::HardFirst: return "hard-first";
    case SchedulingPolicy::EasyFirst: return "easy-first";
    }
    return "conflict-aware";
}

SchedulingPolicy policy_from_string(const std::string& s) {
    if (s == "conflict-aware") return SchedulingPolicy::ConflictAware;
    if (s == "hard-first") return SchedulingPolicy::HardFirst;
    if (s == "easy-first") return SchedulingPolicy::EasyFirst;
    throw ConfigError("policy", "expected conflict-aware, hard-first or easy-first, got '" + s + "'");
}

std::string to_string(SupportPruning mode) {
    return mode == SupportPruning::Global ? "global" : "per-node";
}

SupportPruning support_pruning_from_string(const std::string& s) {
    if (s == "global") return SupportPruning::Global;
    if (s == "per-node") return SupportPruning::PerNode;
    throw ConfigError("support_pruning", "expected global or per-node, got '" + s + "'");
}

void PipelineConfig::validate() const {
    auto unit = [](const char* key, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(key, "must lie in [0, 1], got " + std::to_string(v));
        }
    };
    unit("tau_q", tau_q);
    unit("tau_sim", tau_sim);
    unit("tau_conf", tau_conf);
    unit("tau_accept", tau_accept);
    unit("tau_gate", tau_gate);
    unit("tau_merge", tau_merge);
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta", "must be > 0");
    if (budget_k < 1) throw ConfigError("budget_k", "must be >= 1");
    if (max_support_edges < 0) throw ConfigError("max_support_edges", "must be >= 0");
    if (rounds < 1) throw ConfigError("rounds", "must be >= 1");
    if (per_pair_cap < 1) throw ConfigError("per_pair_cap", "must be >= 1");
}

double logit(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("logit: probability must lie in (0, 1), got " + std::to_string(p));
    }
    return std::log(p / (1.0 - p));
}

double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DataError("embedding dimension mismatch: " + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()));
    }
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double cosine(std::span<const double> x, std::span<const double> y) {
    const double nx = std::sqrt(dot(x, x));
    const double ny = std::sqrt(dot(y, y));
    if (nx == 0.0 || ny == 0.0) throw DataError("cosine of a zero vector");
    return std::clamp(dot(x, y) / (nx * ny), -1.0, 1.0);
}

Embedding normalized(Embedding v) {
    const double n = std::sqrt(dot(v, v));
    if (n == 0.0 || !std::isfinite(n)) throw DataError("cannot normalize a zero or non-finite vector");
    for (auto& x : v) x /= n;
    return v;
}

std::vector<ClaimNode> normalize_claims(std::span<const AtomicClaim> pool, const PipelineConfig& cfg) {
    std::vector<ClaimNode> nodes;
    std::set<std::string> seen_ids;
    for (const auto& claim : pool) {
        if (!claim.embedding) throw DataError("claim '" + claim.id + "' has no embedding", "normalize");
        if (claim.text.empty()) throw DataError("claim '" + claim.id + "' has empty text", "normalize");
        if (!seen_ids.insert(claim.id).second) {
            throw DataError("duplicate claim id '" + claim.id + "'", "normalize");
        }
        if (std::abs(std::sqrt(dot(*claim.embedding, *claim.embedding)) - 1.0) > 1e-6) {
            throw DataError("claim '" + claim.id + "' embedding is not unit-normalized", "normalize");
        }

        ClaimNode* target = nullptr;
        for (auto& node : nodes) {
            if (node.entities == claim.entities && cosine(node.embedding, *claim.embedding) >= cfg.tau_merge) {
                target = &node;
                break;
            }
        }
        if (target == nullptr) {
            ClaimNode node;
            node.id = NodeId{static_cast<std::uint32_t>(nodes.size())};
            node.canonical_text = claim.text;
            node.entities = claim.entities;
            node.embedding = *claim.embedding;
            nodes.push_back(std::move(node));
            target = &nodes.back();
        } else if (claim.text.size() > target->canonical_text.size()) {
            target->canonical_text = claim.text;
        }
        target->members.push_back(claim.id);
        target->sources.insert(claim.source_doc);
    }
    return nodes;
}

double initial_credibility(const ClaimNode& node) {
    const auto n = static_cast<double>(std::max<std::size_t>(node.sources.size(), 1));
    return std::min(0.9, 0.5 + 0.1 * (n - 1.0));
}

}  // namespace arbgraph
