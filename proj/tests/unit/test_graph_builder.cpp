#include <doctest.h>

#include <atomic>
#include <cmath>

#include "arbgraph/error.hpp"
#include "arbgraph/graph_builder.hpp"
#include "arbgraph/oracle_backend.hpp"
#include "arbgraph/simulation.hpp"

using namespace arbgraph;

namespace {

ClaimNode node(std::uint32_t id, Embedding v, std::string text = {}) {
    ClaimNode n;
    n.id = NodeId{id};
    n.canonical_text = text.empty() ? "claim " + std::to_string(id) : std::move(text);
    n.members = {"m" + std::to_string(id)};
    n.sources = {"D" + std::to_string(id)};
    n.embedding = normalized(std::move(v));
    return n;
}

// Unit vector at `cos` from e0, placed in the plane of e0 and e_{axis}.
Embedding at_cosine(double cos, std::size_t axis, std::size_t dim = 6) {
    Embedding v(dim, 0.0);
    v[0] = cos;
    v[axis] = std::sqrt(1.0 - cos * cos);
    return v;
}

class ScriptedVerifier final : public Backend {
public:
    std::map<std::pair<std::uint32_t, std::uint32_t>, RelationVerdict> verdicts;
    mutable std::atomic<int> calls{0};

    std::vector<AtomicClaim> extract_claims(const Document&) const override { return {}; }
    std::vector<Embedding> embed(std::span<const std::string>) const override { return {}; }
    RelationVerdict verify_relation(const ClaimNode& x, const ClaimNode& y) const override {
        ++calls;
        auto key = std::minmax(x.id.value, y.id.value);
        auto it = verdicts.find({key.first, key.second});
        return it == verdicts.end() ? RelationVerdict{} : it->second;
    }
    ArbitrationVerdict arbitrate(const ClaimNode& x, const ClaimNode& y, std::span<const ClaimNode>,
                                 double) const override {
        return abstain(x.id, y.id);
    }
};

}  // namespace

TEST_CASE("query filter boundaries") {
    const Embedding q{1, 0, 0, 0, 0, 0};
    const std::vector<ClaimNode> nodes{node(0, at_cosine(0.31, 1)), node(1, at_cosine(0.29, 2)),
                                       node(2, at_cosine(0.3, 3))};
    const auto kept = filter_by_query(q, nodes, 0.3);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].id == NodeId{0});
    CHECK(kept[1].id == NodeId{2});
    CHECK(filter_by_query(q, nodes, 0.0).size() == 3);

    std::vector<ClaimNode> missing{node(0, {1, 0, 0, 0, 0, 0})};
    missing[0].embedding.clear();
    CHECK_THROWS_AS(filter_by_query(q, missing, 0.3), DataError);
}

TEST_CASE("candidate mining") {
    const std::vector<ClaimNode> orthogonal{node(0, {1, 0, 0}), node(1, {0, 1, 0}), node(2, {0, 0, 1})};
    CHECK(mine_candidates(orthogonal, 0.6).empty());

    std::vector<ClaimNode> same;
    for (std::uint32_t i = 0; i < 5; ++i) same.push_back(node(i, {1, 1, 0}));
    const auto pairs = mine_candidates(same, 0.6);
    CHECK(pairs.size() == 10);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        CHECK(std::tie(pairs[i - 1].a, pairs[i - 1].b) < std::tie(pairs[i].a, pairs[i].b));
    }

    const std::vector<ClaimNode> dups{node(0, {1, 0}), node(1, {1, 0}), node(2, {0.99, 0.141})};
    const auto exact = mine_candidates(dups, 1.0);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].a == NodeId{0});
    CHECK(exact[0].b == NodeId{1});
}

TEST_CASE("edge instantiation thresholds") {
    const std::vector<ClaimNode> nodes{node(0, {1, 0}), node(1, {1, 0}), node(2, {1, 0}), node(3, {1, 0})};
    ScriptedVerifier v;
    v.verdicts[{0, 1}] = {Relation::Support, 0.71};
    v.verdicts[{0, 2}] = {Relation::Contradiction, 0.65};
    v.verdicts[{0, 3}] = {Relation::Neutral, 0.99};
    v.verdicts[{1, 2}] = {Relation::Contradiction, 0.7};
    const auto pairs = mine_candidates(nodes, 0.6);
    const auto edges = build_edges(pairs, nodes, v, 0.7, 4);
    CHECK(v.calls == static_cast<int>(pairs.size()));
    REQUIRE(edges.support.size() == 1);
    CHECK(edges.support[0].a == NodeId{0});
    CHECK(edges.support[0].b == NodeId{1});
    CHECK(edges.support[0].confidence == 0.71);
    REQUIRE(edges.contradiction.size() == 1);
    CHECK(edges.contradiction[0].a == NodeId{1});
    CHECK(edges.contradiction[0].b == NodeId{2});
}

TEST_CASE("support pruning") {
    std::vector<Edge> edges;
    const double sims[] = {0.7, 0.9, 0.8, 0.95, 0.6};
    for (std::uint32_t i = 0; i < 5; ++i) {
        edges.push_back(Edge{NodeId{i}, NodeId{i + 10}, EdgeKind::Support, 0.9, sims[i]});
    }
    const auto top3 = prune_support(edges, 3);
    REQUIRE(top3.size() == 3);
    CHECK(top3[0].a == NodeId{1});
    CHECK(top3[1].a == NodeId{2});
    CHECK(top3[2].a == NodeId{3});
    CHECK(prune_support(edges, 0).empty());
    CHECK(prune_support(edges, 5).size() == 5);
    CHECK(prune_support(edges, 100).size() == 5);

    // Ties resolve to the smaller endpoint pair.
    std::vector<Edge> ties{Edge{NodeId{2}, NodeId{3}, EdgeKind::Support, 0.9, 0.8},
                           Edge{NodeId{0}, NodeId{1}, EdgeKind::Support, 0.9, 0.8}};
    const auto one = prune_support(ties, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].a == NodeId{0});
}

TEST_CASE("per-node support pruning caps degree") {
    std::vector<Edge> star;
    for (std::uint32_t i = 1; i <= 5; ++i) {
        star.push_back(Edge{NodeId{0}, NodeId{i}, EdgeKind::Support, 0.9, 0.5 + 0.05 * i});
    }
    star.push_back(Edge{NodeId{1}, NodeId{2}, EdgeKind::Support, 0.9, 0.6});
    const auto kept = prune_support(star, 2, SupportPruning::PerNode);
    std::map<NodeId, int> degree;
    for (const auto& e : kept) {
        ++degree[e.a];
        ++degree[e.b];
    }
    for (const auto& [id, d] : degree) CHECK(d <= 2);
    // The two most similar spokes survive, plus the 1-2 edge.
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].b == NodeId{4});
    CHECK(kept[1].b == NodeId{5});
    CHECK(kept[2].a == NodeId{1});
}

TEST_CASE("minimal graph: one document, one claim") {
    OracleTable t;
    t.extraction["D1"] = {{"Only claim.", {"x"}}};
    t.embeddings["q"] = {1.0, 0.0};
    t.embeddings["Only claim."] = {1.0, 0.0};
    const OracleBackend b(t);
    const std::vector<Document> docs{{"D1", "Only claim."}};
    BuildStats stats;
    const auto g = build_graph("q", docs, b, PipelineConfig{}, &stats);
    CHECK(g.nodes.size() == 1);
    CHECK(g.support_edges.empty());
    CHECK(g.contradiction_edges.empty());
    CHECK(g.nodes.at(NodeId{0}).probability() == doctest::Approx(0.5));
    CHECK(stats.verifier_calls == 0);
}

TEST_CASE("EAS documents: homonym filtered, membership conflict present") {
    const auto preset = eas_preset();
    const OracleBackend b(preset.table);
    BuildStats stats;
    const auto g = build_graph(preset.scenario.query, preset.scenario.documents, b, PipelineConfig{}, &stats);
    CHECK(stats.claims == 5);
    CHECK(stats.normalized_nodes == 5);
    REQUIRE(g.nodes.size() == 4);
    for (const auto& [id, n] : g.nodes) CHECK(n.canonical_text.find("Alert") == std::string::npos);
    REQUIRE(g.contradiction_edges.size() == 1);
    const auto& c = g.contradiction_edges[0];
    CHECK(g.node(c.a).canonical_text == "The U.S. joined the EAS in 2011.");
    CHECK(g.node(c.b).canonical_text == "The U.S. is not a member of the EAS.");
}

TEST_CASE("planted six-node graph matches hand-built adjacency") {
    // Two topics. Topic one: T0 with supporters S1 S2, opposed by F3.
    // Topic two: U4 and an unrelated U5 that sits below tau_sim.
    OracleTable t;
    t.embeddings["q"] = normalized({1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    auto vec = [](double a, std::size_t topic, double b, std::size_t own) {
        Embedding v(10, 0.0);
        v[0] = a;
        v[topic] = b;
        v[own] = std::sqrt(1.0 - a * a - b * b);
        return v;
    };
    // Pairwise cosines inside topic one are 0.25 + b_i b_j: T0-S1 0.775, T0-S2 0.7375,
    // S1-S2 0.705, T0-F3 0.8125, S1-F3 0.775, S2-F3 0.7375.
    t.embeddings["T0"] = vec(0.5, 1, 0.75, 4);
    t.embeddings["S1"] = vec(0.5, 1, 0.7, 5);
    t.embeddings["S2"] = vec(0.5, 1, 0.65, 6);
    t.embeddings["F3"] = vec(0.5, 1, 0.75, 7);
    t.embeddings["U4"] = vec(0.5, 2, 0.75, 8);
    t.embeddings["U5"] = vec(0.5, 3, 0.75, 9);
    const char* texts[] = {"T0", "S1", "S2", "F3", "U4", "U5"};
    for (int i = 0; i < 6; ++i) {
        const auto id = "D" + std::to_string(i);
        t.extraction[id] = {{texts[i], {texts[i]}}};
    }
    t.add_relation("S1", "T0", Relation::Support, 0.9);
    t.add_relation("S2", "T0", Relation::Support, 0.8);
    t.add_relation("T0", "F3", Relation::Contradiction, 0.95);
    t.add_relation("S1", "S2", Relation::Neutral, 0.9);
    t.add_relation("S1", "F3", Relation::Contradiction, 0.6);  // below tau_conf
    const OracleBackend b(t);
    std::vector<Document> docs;
    for (int i = 0; i < 6; ++i) docs.push_back({"D" + std::to_string(i), texts[i]});

    BuildStats stats;
    PipelineConfig cfg;
    const auto g = build_graph("q", docs, b, cfg, &stats);
    CHECK(g.nodes.size() == 6);
    // Hand count: the 6 topic-one pairs clear 0.6; cross-topic pairs sit at 0.25.
    CHECK(stats.candidate_pairs == 6);
    CHECK(stats.verifier_calls == 6);
    REQUIRE(g.support_edges.size() == 2);
    CHECK(g.support_edges[0].a == NodeId{0});
    CHECK(g.support_edges[0].b == NodeId{1});
    CHECK(g.support_edges[0].similarity == doctest::Approx(0.775));
    CHECK(g.support_edges[1].b == NodeId{2});
    CHECK(g.support_edges[1].similarity == doctest::Approx(0.7375));
    REQUIRE(g.contradiction_edges.size() == 1);
    CHECK(g.contradiction_edges[0].a == NodeId{0});
    CHECK(g.contradiction_edges[0].b == NodeId{3});

    cfg.max_support_edges = 1;
    const auto pruned = build_graph("q", docs, b, cfg);
    REQUIRE(pruned.support_edges.size() == 1);
    CHECK(pruned.support_edges[0].b == NodeId{1});
    CHECK(pruned.contradiction_edges.size() == 1);
}

TEST_CASE("stage labels on build errors") {
    OracleTable t;
    t.extraction["D1"] = {{"claim", {"x"}}};
    const OracleBackend b(t);  // no embeddings
    const std::vector<Document> docs{{"D1", "text"}};
    try {
        build_graph("q", docs, b, PipelineConfig{});
        FAIL("expected a backend error");
    } catch (const BackendError& e) {
        CHECK(e.stage() == "embed");
    }
    const std::vector<Document> unknown{{"D2", "text"}};
    try {
        build_graph("q", unknown, b, PipelineConfig{});
        FAIL("expected a backend error");
    } catch (const BackendError& e) {
        CHECK(e.stage() == "extract");
    }
    CHECK_THROWS_AS(build_graph("q", {}, b, PipelineConfig{}), DataError);
}

TEST_CASE("build is deterministic across parallelism") {
    const auto gen = generate_scenario(ScenarioKnobs{}, 7);
    const OracleBackend b(gen.table);
    const auto one = build_graph(gen.scenario.query, gen.scenario.documents, b, PipelineConfig{}, nullptr, 1);
    const auto many = build_graph(gen.scenario.query, gen.scenario.documents, b, PipelineConfig{}, nullptr, 8);
    CHECK(dump(to_json(one)) == dump(to_json(many)));
}
