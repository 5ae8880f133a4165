#include "arbgraph/graph_builder.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <tuple>

#include "arbgraph/error.hpp"
#include "arbgraph/parallel.hpp"

namespace arbgraph {

namespace {

bool by_endpoints(const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); }

bool by_similarity(const Edge& x, const Edge& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return by_endpoints(x, y);
}

const ClaimNode& require_embedded(const ClaimNode& n) {
    if (n.embedding.empty()) throw DataError("node " + to_string(n.id) + " has no embedding");
    return n;
}

}  // namespace

std::vector<ClaimNode> filter_by_query(std::span<const double> query_embedding, std::span<const ClaimNode> nodes,
                                       double tau_q) {
    if (query_embedding.empty()) throw DataError("query has no embedding", "filter");
    std::vector<ClaimNode> kept;
    for (const auto& n : nodes) {
        if (cosine(query_embedding, require_embedded(n).embedding) >= tau_q) kept.push_back(n);
    }
    return kept;
}

std::vector<CandidatePair> mine_candidates(std::span<const ClaimNode> nodes, double tau_sim) {
    std::vector<CandidatePair> pairs;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& x = require_embedded(nodes[i]);
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const auto& y = require_embedded(nodes[j]);
            const double sim = cosine(x.embedding, y.embedding);
            if (sim >= tau_sim) {
                auto [a, b] = std::minmax(x.id, y.id);
                pairs.push_back(CandidatePair{a, b, sim});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const CandidatePair& l, const CandidatePair& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
    return pairs;
}

EdgeSets build_edges(std::span<const CandidatePair> pairs, std::span<const ClaimNode> nodes,
                     const Backend& verifier, double tau_conf, std::size_t parallelism) {
    std::map<NodeId, const ClaimNode*> index;
    for (const auto& n : nodes) index.emplace(n.id, &n);
    auto lookup = [&](NodeId id) -> const ClaimNode& {
        auto it = index.find(id);
        if (it == index.end()) throw DataError("candidate endpoint " + to_string(id) + " is not a node", "verify");
        return *it->second;
    };
    for (const auto& p : pairs) {
        if (!(p.a < p.b)) throw DataError("candidate pair must satisfy a < b", "verify");
        lookup(p.a);
        lookup(p.b);
    }

    std::vector<RelationVerdict> verdicts(pairs.size());
    parallel_for(pairs.size(), parallelism, [&](std::size_t i) {
        verdicts[i] = verifier.verify_relation(lookup(pairs[i].a), lookup(pairs[i].b));
    });

    EdgeSets out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& v = verdicts[i];
        if (v.relation == Relation::Neutral || v.confidence < tau_conf) continue;
        const auto kind = v.relation == Relation::Support ? EdgeKind::Support : EdgeKind::Contradiction;
        Edge e{pairs[i].a, pairs[i].b, kind, v.confidence, pairs[i].similarity};
        (kind == EdgeKind::Support ? out.support : out.contradiction).push_back(e);
    }
    std::sort(out.support.begin(), out.support.end(), by_endpoints);
    std::sort(out.contradiction.begin(), out.contradiction.end(), by_endpoints);
    return out;
}

std::vector<Edge> prune_support(std::vector<Edge> support, int max_edges, SupportPruning mode) {
    if (max_edges < 0) throw DataError("max_support_edges must be >= 0", "prune");
    const auto limit = static_cast<std::size_t>(max_edges);
    std::sort(support.begin(), support.end(), by_similarity);
    if (mode == SupportPruning::Global) {
        if (support.size() > limit) support.resize(limit);
    } else {
        std::map<NodeId, std::size_t> degree;
        std::vector<Edge> kept;
        for (const auto& e : support) {
            if (degree[e.a] < limit && degree[e.b] < limit) {
                ++degree[e.a];
                ++degree[e.b];
                kept.push_back(e);
            }
        }
        support = std::move(kept);
    }
    std::sort(support.begin(), support.end(), by_endpoints);
    return support;
}

namespace {

class CountingVerifier final : public Backend {
public:
    explicit CountingVerifier(const Backend& inner) : inner_(inner) {}
    std::vector<AtomicClaim> extract_claims(const Document& d) const override { return inner_.extract_claims(d); }
    std::vector<Embedding> embed(std::span<const std::string> t) const override { return inner_.embed(t); }
    RelationVerdict verify_relation(const ClaimNode& x, const ClaimNode& y) const override {
        ++calls_;
        return inner_.verify_relation(x, y);
    }
    ArbitrationVerdict arbitrate(const ClaimNode& x, const ClaimNode& y, std::span<const ClaimNode> ctx,
                                 double tau_gate) const override {
        return inner_.arbitrate(x, y, ctx, tau_gate);
    }
    std::size_t calls() const { return calls_; }

private:
    const Backend& inner_;
    mutable std::atomic<std::size_t> calls_{0};
};

template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        rethrow_with_stage(e, stage);
    }
}

}  // namespace

EvidenceGraph build_graph_from_pool(const ClaimPool& pool, const Backend& backend, const PipelineConfig& cfg,
                                    BuildStats* stats, std::size_t parallelism) {
    staged("config", [&] {
        cfg.validate();
        return 0;
    });
    if (!pool.query_embedding) throw DataError("claim pool has no query embedding", "filter");

    auto nodes = staged("normalize", [&] { return normalize_claims(pool.claims, cfg); });
    auto kept = staged("filter", [&] { return filter_by_query(*pool.query_embedding, nodes, cfg.tau_q); });
    for (auto& n : kept) n.logit = logit(initial_credibility(n));
    auto pairs = staged("mine", [&] { return mine_candidates(kept, cfg.tau_sim); });

    CountingVerifier counting(backend);
    auto edges = staged("verify", [&] { return build_edges(pairs, kept, counting, cfg.tau_conf, parallelism); });
    const auto support_before = edges.support.size();

    EvidenceGraph g;
    g.query = pool.query;
    g.support_edges = staged("prune", [&] {
        return prune_support(std::move(edges.support), cfg.max_support_edges, cfg.support_pruning);
    });
    g.contradiction_edges = std::move(edges.contradiction);
    for (auto& n : kept) {
        const auto id = n.id;
        g.nodes.emplace(id, std::move(n));
    }

    if (stats) {
        stats->claims = pool.claims.size();
        stats->normalized_nodes = nodes.size();
        stats->retained_nodes = g.nodes.size();
        stats->candidate_pairs = pairs.size();
        stats->verifier_calls = counting.calls();
        stats->support_before_pruning = support_before;
    }
    return g;
}

ClaimPool ingest_documents(const std::string& query, std::span<const Document> documents, const Backend& backend) {
    if (documents.empty()) throw DataError("no documents to ingest", "extract");
    ClaimPool pool;
    pool.query = query;
    for (const auto& doc : documents) {
        if (doc.text.empty()) throw DataError("document '" + doc.id + "' is empty", "extract");
        auto claims = staged("extract", [&] { return backend.extract_claims(doc); });
        for (auto& c : claims) pool.claims.push_back(std::move(c));
    }
    std::vector<std::string> texts{query};
    for (const auto& c : pool.claims) texts.push_back(c.text);
    auto vectors = staged("embed", [&] { return backend.embed(texts); });
    if (vectors.size() != texts.size()) throw BackendError("embedding count mismatch", "embed");
    pool.query_embedding = std::move(vectors[0]);
    for (std::size_t i = 0; i < pool.claims.size(); ++i) pool.claims[i].embedding = std::move(vectors[i + 1]);
    return pool;
}

EvidenceGraph build_graph(const std::string& query, std::span<const Document> documents, const Backend& backend,
                          const PipelineConfig& cfg, BuildStats* stats, std::size_t parallelism) {
    const auto pool = ingest_documents(query, documents, backend);
    auto g = build_graph_from_pool(pool, backend, cfg, stats, parallelism);
    if (stats) stats->documents = documents.size();
    return g;
}

}  // namespace arbgraph
