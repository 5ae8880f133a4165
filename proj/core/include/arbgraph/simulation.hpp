#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arbgraph/arbitration.hpp"
#include "arbgraph/backend.hpp"
#include "arbgraph/graph_builder.hpp"
#include "arbgraph/oracle_backend.hpp"

namespace arbgraph {

enum class TruthLabel { True, False, Irrelevant };

std::string to_string(TruthLabel label);
TruthLabel truth_label_from_string(const std::string& s);

/// Generator controls. Every conflict is one True claim against one False
/// claim about the same subject.
struct ScenarioKnobs {
    int conflicts = 6;
    // Uncontested True claims, each on its own subject.
    int uncontested_true = 2;
    // Genuine supporters per True conflict claim: a uniform draw from
    // [min_supporters, max_supporters].
    int min_supporters = 2;
    int max_supporters = 2;
    // Spurious supporters attached to every False conflict claim. They are
    // less similar to their target than genuine supporters.
    int noisy_supporters = 0;
    // Off-topic claims that share a conflict's surface form and lend
    // support to its False claim; their query relevance sits in [0.1, 0.2].
    int homonym_noise = 0;
    // Paraphrase copies spread over conflict claims, each in its own
    // document; they merge into the original and raise its prior.
    int redundant_paraphrases = 0;
    // Query relevance of on-topic claims is uniform in [min, max].
    double min_relevance = 0.45;
    double max_relevance = 0.55;
    // Probability that a conflict's arbitration rule is inverted.
    double arbitrator_error = 0.0;

    friend bool operator==(const ScenarioKnobs&, const ScenarioKnobs&) = default;
};

Json to_json(const ScenarioKnobs& knobs);
ScenarioKnobs knobs_from_json(const Json& j, ScenarioKnobs base = {});

struct SyntheticScenario {
    std::string name;
    std::string query;
    std::vector<Document> documents;
    // Claim text -> planted label. Paraphrases carry their original's label.
    std::map<std::string, TruthLabel> truth_labels;
    // Claim text -> fact key; paraphrases share their original's key.
    std::map<std::string, std::string> fact_of;
    ScenarioKnobs knobs;
    std::uint64_t seed = 0;

    std::size_t true_fact_count() const;
};

struct GeneratedScenario {
    SyntheticScenario scenario;
    OracleTable table;
};

/// Pure function of (knobs, seed).
GeneratedScenario generate_scenario(const ScenarioKnobs& knobs, std::uint64_t seed);

/// Four documents: membership (D1), attendance (D2), a skipped meeting plus
/// a non-membership inference (D3), and an Emergency Alert System homonym
/// (D4).
GeneratedScenario eas_preset();

Json to_json(const SyntheticScenario& scenario);
SyntheticScenario scenario_from_json(const Json& j);

struct RunMetrics {
    double recovery_recall = 0.0;
    double recovery_precision = 0.0;
    double density = 0.0;  // validated True facts per context token
    std::size_t arbitration_calls = 0;
    std::size_t verifier_calls = 0;

    double recall_precision() const { return recovery_recall * recovery_precision; }
};

/// recall = distinct True facts in the validated set / True facts planted;
/// precision = validated nodes labelled True / validated nodes (0 when the
/// set is empty). Throws DataError for a node text without a label.
RunMetrics evaluate_run(const SyntheticScenario& scenario, std::span<const ClaimNode> validated,
                        const ArbitrationTrace& trace, std::size_t verifier_calls = 0);

struct ScenarioRun {
    EvidenceGraph graph;  // after arbitration
    ArbitrationTrace trace;
    BuildStats stats;
    std::vector<ClaimNode> validated;
    RunMetrics metrics;
};

/// Full pipeline on one generated scenario with the oracle backend.
ScenarioRun run_scenario(const GeneratedScenario& generated, const PipelineConfig& cfg);

enum class SweepParameter { TauQ, MaxSupportEdges, BudgetK, Policy };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);

// Returns `base` with the grid value applied. Throws ConfigError on a bad value.
PipelineConfig apply_grid_value(PipelineConfig base, SweepParameter p, const std::string& value);

struct SweepRow {
    std::string parameter;
    std::string value;
    double recall_mean = 0.0;
    double precision_mean = 0.0;
    double density_mean = 0.0;
    double calls_mean = 0.0;
    double verifier_calls_mean = 0.0;
    double recall_precision_mean = 0.0;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::MaxSupportEdges;
    std::vector<std::string> grid;
    ScenarioKnobs knobs;
    int scenarios = 5;
    std::uint64_t batch_seed = 0;
    PipelineConfig base;
};

/// Runs every grid point over the same seeded scenario batch (scenario i
/// uses derive_seed(batch_seed, i)). Requires >= 3 grid points and >= 5
/// scenarios. Rows follow grid order.
std::vector<SweepRow> sweep(const SweepSpec& spec, std::size_t parallelism = 1);

std::uint64_t derive_seed(std::uint64_t batch_seed, std::uint64_t index);

std::string sweep_csv(std::span<const SweepRow> rows);
Json to_json(std::span<const SweepRow> rows);

/// Defaults used by the CLI and the acceptance suite for each sweep.
ScenarioKnobs default_sweep_knobs(SweepParameter p);
std::vector<std::string> default_sweep_grid(SweepParameter p);
PipelineConfig default_sweep_config(SweepParameter p);

}  // namespace arbgraph
