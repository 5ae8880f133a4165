#include "arbgraph/simulation.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "arbgraph/error.hpp"
#include "arbgraph/parallel.hpp"

namespace arbgraph {

std::string to_string(TruthLabel label) {
    switch (label) {
    case TruthLabel::True: return "true";
    case TruthLabel::False: return "false";
    case TruthLabel::Irrelevant: return "irrelevant";
    }
    return "irrelevant";
}

TruthLabel truth_label_from_string(const std::string& s) {
    if (s == "true") return TruthLabel::True;
    if (s == "false") return TruthLabel::False;
    if (s == "irrelevant") return TruthLabel::Irrelevant;
    throw DataError("unknown truth label '" + s + "'");
}

Json to_json(const ScenarioKnobs& k) {
    Json j;
    j["conflicts"] = k.conflicts;
    j["uncontested_true"] = k.uncontested_true;
    j["min_supporters"] = k.min_supporters;
    j["max_supporters"] = k.max_supporters;
    j["noisy_supporters"] = k.noisy_supporters;
    j["homonym_noise"] = k.homonym_noise;
    j["redundant_paraphrases"] = k.redundant_paraphrases;
    j["min_relevance"] = k.min_relevance;
    j["max_relevance"] = k.max_relevance;
    j["arbitrator_error"] = k.arbitrator_error;
    return j;
}

ScenarioKnobs knobs_from_json(const Json& j, ScenarioKnobs k) {
    if (!j.is_object()) throw ConfigError("<knobs>", "knobs must be a JSON object");
    auto integer = [](const Json& v, const std::string& key) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(key, "expected an integer >= 0");
        return v.get<int>();
    };
    auto unit = [](const Json& v, const std::string& key) {
        if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
            throw ConfigError(key, "expected a number in [0, 1]");
        }
        return v.get<double>();
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "conflicts") k.conflicts = integer(v, key);
        else if (key == "uncontested_true") k.uncontested_true = integer(v, key);
        else if (key == "min_supporters") k.min_supporters = integer(v, key);
        else if (key == "max_supporters") k.max_supporters = integer(v, key);
        else if (key == "noisy_supporters") k.noisy_supporters = integer(v, key);
        else if (key == "homonym_noise") k.homonym_noise = integer(v, key);
        else if (key == "redundant_paraphrases") k.redundant_paraphrases = integer(v, key);
        else if (key == "min_relevance") k.min_relevance = unit(v, key);
        else if (key == "max_relevance") k.max_relevance = unit(v, key);
        else if (key == "arbitrator_error") k.arbitrator_error = unit(v, key);
        else throw ConfigError(key, "unknown knob");
    }
    if (k.min_supporters > k.max_supporters) throw ConfigError("min_supporters", "exceeds max_supporters");
    if (k.min_relevance > k.max_relevance) throw ConfigError("min_relevance", "exceeds max_relevance");
    if (k.max_relevance > 0.6) throw ConfigError("max_relevance", "must be <= 0.6");
    return k;
}

std::size_t SyntheticScenario::true_fact_count() const {
    std::set<std::string> facts;
    for (const auto& [text, label] : truth_labels) {
        if (label == TruthLabel::True) facts.insert(fact_of.at(text));
    }
    return facts.size();
}

namespace {

// Portable draws from a 64-bit engine; std::uniform_*_distribution output
// differs between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int uniform_int(int lo, int hi) {  // inclusive
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(engine_() % span);
    }
    bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

private:
    std::mt19937_64 engine_;
};

// Claims are embedded as a * query + b * topic + c * own-direction over an
// orthonormal basis, so cosine(x, y) = a_x a_y + b_x b_y within a topic and
// a_x a_y across topics.
class EmbeddingSpace {
public:
    int new_direction() { return next_++; }

    int add(double query_weight, int topic, double topic_weight) {
        const double rest = 1.0 - query_weight * query_weight - topic_weight * topic_weight;
        if (rest < -1e-12) throw DataError("embedding weights exceed unit norm");
        Sparse v{{0, query_weight}, {topic, topic_weight}, {new_direction(), std::sqrt(std::max(rest, 0.0))}};
        vectors_.push_back(std::move(v));
        return static_cast<int>(vectors_.size()) - 1;
    }

    // Near-duplicate of `original`: cosine 1 / sqrt(1 + 0.04).
    int add_paraphrase(int original) {
        Sparse v = vectors_[original];
        v.emplace_back(new_direction(), 0.2);
        vectors_.push_back(std::move(v));
        return static_cast<int>(vectors_.size()) - 1;
    }

    Embedding dense(int index) const {
        Embedding out(static_cast<std::size_t>(next_), 0.0);
        for (const auto& [dim, w] : vectors_[index]) out[static_cast<std::size_t>(dim)] += w;
        return normalized(std::move(out));
    }

    Embedding query() const {
        Embedding out(static_cast<std::size_t>(next_), 0.0);
        out[0] = 1.0;
        return out;
    }

private:
    using Sparse = std::vector<std::pair<int, double>>;
    int next_ = 1;  // dimension 0 is the query direction
    std::vector<Sparse> vectors_;
};

struct PlantedClaim {
    std::string text;
    std::vector<std::string> entities;
    TruthLabel label;
    std::string fact;
    int vector;
};

constexpr double kCoreTopicWeight = 0.75;

std::string doc_id(std::size_t index) {
    std::ostringstream os;
    os << 'D' << std::setw(3) << std::setfill('0') << index + 1;
    return os.str();
}

}  // namespace

GeneratedScenario generate_scenario(const ScenarioKnobs& knobs, std::uint64_t seed) {
    if (knobs.conflicts < 0 || knobs.uncontested_true < 0 || knobs.noisy_supporters < 0 || knobs.homonym_noise < 0 ||
        knobs.redundant_paraphrases < 0 || knobs.min_supporters < 0 || knobs.min_supporters > knobs.max_supporters) {
        throw ConfigError("knobs", "counts must be >= 0 and min_supporters <= max_supporters");
    }
    Rng rng(seed);
    EmbeddingSpace space;
    OracleTable table;
    std::vector<PlantedClaim> claims;
    auto relevance = [&] { return rng.uniform(knobs.min_relevance, knobs.max_relevance); };

    struct Conflict {
        std::size_t true_claim;
        std::size_t false_claim;
    };
    std::vector<Conflict> conflicts;
    std::vector<int> conflict_topics;

    for (int g = 0; g < knobs.conflicts; ++g) {
        const int topic = space.new_direction();
        conflict_topics.push_back(topic);
        const int value = 1900 + 7 * g;
        const auto subject = "S" + std::to_string(g);
        const auto attribute = "A" + std::to_string(g);
        auto claim_text = [&](int v) {
            return "Subject " + subject + " has attribute " + attribute + " equal to " + std::to_string(v) +
                   ", per its primary record.";
        };
        const auto fact = "conflict-" + std::to_string(g);
        claims.push_back({claim_text(value), {subject, attribute, std::to_string(value)}, TruthLabel::True,
                          fact + "-true", space.add(relevance(), topic, kCoreTopicWeight)});
        claims.push_back({claim_text(value + 1), {subject, attribute, std::to_string(value + 1)}, TruthLabel::False,
                          fact + "-false", space.add(relevance(), topic, kCoreTopicWeight)});
        const auto t = claims.size() - 2;
        const auto f = claims.size() - 1;
        conflicts.push_back({t, f});
        table.add_relation(claims[t].text, claims[f].text, Relation::Contradiction, rng.uniform(0.8, 0.98));
        table.add_context_arbitration(claims[t].text, claims[f].text, rng.bernoulli(knobs.arbitrator_error));

        const int supporters = rng.uniform_int(knobs.min_supporters, knobs.max_supporters);
        for (int s = 0; s < supporters; ++s) {
            const auto text = "Record " + std::to_string(s) + " for subject " + subject + " confirms " + attribute +
                              " is " + std::to_string(value) + ".";
            claims.push_back({text, {subject, "record " + std::to_string(s)}, TruthLabel::True,
                              fact + "-support-" + std::to_string(s),
                              space.add(relevance(), topic, rng.uniform(0.72, 0.8))});
            table.add_relation(text, claims[t].text, Relation::Support, rng.uniform(0.75, 0.95));
        }
        for (int s = 0; s < knobs.noisy_supporters; ++s) {
            const auto text = "Rumor " + std::to_string(s) + " about subject " + subject + " claims " + attribute +
                              " is " + std::to_string(value + 1) + ".";
            claims.push_back({text, {subject, "rumor " + std::to_string(s)}, TruthLabel::False,
                              fact + "-rumor-" + std::to_string(s),
                              space.add(relevance(), topic, rng.uniform(0.5, 0.57))});
            table.add_relation(text, claims[f].text, Relation::Support, rng.uniform(0.75, 0.9));
        }
    }

    for (int h = 0; h < knobs.homonym_noise; ++h) {
        const bool attached = knobs.conflicts > 0;
        const int g = attached ? h % knobs.conflicts : 0;
        const int topic = attached ? conflict_topics[static_cast<std::size_t>(g)] : space.new_direction();
        const auto text = "Homonym H" + std::to_string(h) + " shares the name of subject S" + std::to_string(g) +
                          " and lists " + std::to_string(1900 + 7 * g + 1) + ".";
        claims.push_back({text, {"h" + std::to_string(h)}, TruthLabel::Irrelevant, "homonym-" + std::to_string(h),
                          space.add(rng.uniform(0.1, 0.2), topic, kCoreTopicWeight)});
        if (attached) {
            table.add_relation(text, claims[conflicts[static_cast<std::size_t>(g)].false_claim].text,
                               Relation::Support, 0.8);
        }
    }

    for (int u = 0; u < knobs.uncontested_true; ++u) {
        const auto text = "Subject U" + std::to_string(u) + " has a documented founding date of " +
                          std::to_string(1800 + u) + ".";
        claims.push_back({text, {"u" + std::to_string(u), std::to_string(1800 + u)}, TruthLabel::True,
                          "uncontested-" + std::to_string(u),
                          space.add(relevance(), space.new_direction(), kCoreTopicWeight)});
    }

    const auto originals = claims.size();
    if (!conflicts.empty()) {
        for (int p = 0; p < knobs.redundant_paraphrases; ++p) {
            const auto& c = conflicts[static_cast<std::size_t>(rng.uniform_int(0, knobs.conflicts - 1))];
            const auto source = rng.bernoulli(0.5) ? c.true_claim : c.false_claim;
            const auto& orig = claims[source];
            const auto text = orig.entities[0] + " " + orig.entities[1] + " is " + orig.entities[2] + " (copy " +
                              std::to_string(p) + ").";
            claims.push_back({text, orig.entities, orig.label, orig.fact, space.add_paraphrase(orig.vector)});
        }
    }
    (void)originals;

    GeneratedScenario out;
    auto& sc = out.scenario;
    sc.name = "synthetic-" + std::to_string(seed);
    sc.query = "What are the documented attributes of the surveyed subjects?";
    sc.knobs = knobs;
    sc.seed = seed;
    table.embeddings[sc.query] = space.query();
    for (std::size_t i = 0; i < claims.size(); ++i) {
        const auto& c = claims[i];
        const auto id = doc_id(i);
        sc.documents.push_back(Document{id, c.text});
        table.extraction[id] = {ExtractionRule{c.text, c.entities}};
        table.embeddings[c.text] = space.dense(c.vector);
        sc.truth_labels[c.text] = c.label;
        sc.fact_of[c.text] = c.fact;
    }
    out.table = std::move(table);
    return out;
}

GeneratedScenario eas_preset() {
    GeneratedScenario out;
    auto& sc = out.scenario;
    auto& table = out.table;
    sc.name = "eas";
    sc.query = "How is the United States related to the East Asia Summit (EAS)?";

    const std::string joined = "The U.S. joined the EAS in 2011.";
    const std::string attended = "The U.S. attended EAS meetings.";
    const std::string skipped = "The U.S. skipped the 2017 EAS meeting.";
    const std::string not_member = "The U.S. is not a member of the EAS.";
    const std::string alert = "The EAS is a national public warning system.";

    sc.documents = {
        {"D1", "EAS Wiki: The United States joined the East Asia Summit in 2011."},
        {"D2", "ASEAN 2025: U.S. officials attended East Asia Summit meetings."},
        {"D3", "Trump Trips: The President skipped the 2017 East Asia Summit meeting; "
               "some reports concluded the U.S. is not a member."},
        {"D4", "Homonym: The Emergency Alert System (EAS) is a national public warning system."},
    };
    table.extraction["D1"] = {{joined, {"United States", "East Asia Summit", "2011"}}};
    table.extraction["D2"] = {{attended, {"United States", "East Asia Summit", "meetings"}}};
    table.extraction["D3"] = {{skipped, {"United States", "East Asia Summit", "2017 meeting"}},
                              {not_member, {"United States", "East Asia Summit", "membership"}}};
    table.extraction["D4"] = {{alert, {"Emergency Alert System"}}};

    // Basis: query, summit topic, membership, attendance, alert system, then
    // one private direction per claim.
    auto vec = [](std::initializer_list<double> head, std::size_t own) {
        Embedding v(10, 0.0);
        std::size_t i = 0;
        for (double x : head) v[i++] = x;
        v[5 + own] = 0.15;
        return normalized(std::move(v));
    };
    table.embeddings[sc.query] = normalized(Embedding{1, 0.3, 0, 0, 0, 0, 0, 0, 0, 0});
    table.embeddings[joined] = vec({0.5, 0.7, 0.5, 0.0, 0.0}, 0);
    table.embeddings[attended] = vec({0.35, 0.7, 0.15, 0.55, 0.0}, 1);
    table.embeddings[skipped] = vec({0.35, 0.7, 0.1, 0.55, 0.0}, 2);
    table.embeddings[not_member] = vec({0.45, 0.7, 0.5, 0.0, 0.0}, 3);
    table.embeddings[alert] = vec({0.1, 0.05, 0.0, 0.0, 0.95}, 4);

    table.add_relation(joined, not_member, Relation::Contradiction, 0.92);
    table.add_relation(joined, attended, Relation::Support, 0.8);
    table.add_relation(skipped, not_member, Relation::Support, 0.72);
    // Membership and attendance are distinct relations.
    table.add_relation(joined, skipped, Relation::Neutral, 0.85);
    table.add_relation(attended, skipped, Relation::Neutral, 0.6);
    table.add_fixed_arbitration(joined, not_member, joined, 0.9);

    sc.truth_labels = {{joined, TruthLabel::True},
                       {attended, TruthLabel::True},
                       {skipped, TruthLabel::True},
                       {not_member, TruthLabel::False},
                       {alert, TruthLabel::Irrelevant}};
    for (const auto& [text, label] : sc.truth_labels) sc.fact_of[text] = text;
    return out;
}

Json to_json(const SyntheticScenario& sc) {
    Json j;
    j["name"] = sc.name;
    j["query"] = sc.query;
    j["seed"] = sc.seed;
    j["knobs"] = to_json(sc.knobs);
    Json docs = Json::array();
    for (const auto& d : sc.documents) docs.push_back(Json{{"id", d.id}, {"text", d.text}});
    j["documents"] = std::move(docs);
    Json labels = Json::array();
    for (const auto& [text, label] : sc.truth_labels) {
        labels.push_back(Json{{"text", text}, {"label", to_string(label)}, {"fact", sc.fact_of.at(text)}});
    }
    j["labels"] = std::move(labels);
    return j;
}

SyntheticScenario scenario_from_json(const Json& j) {
    try {
        SyntheticScenario sc;
        sc.name = j.at("name").get<std::string>();
        sc.query = j.at("query").get<std::string>();
        sc.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("knobs")) sc.knobs = knobs_from_json(j.at("knobs"));
        for (const auto& d : j.at("documents")) {
            sc.documents.push_back(Document{d.at("id").get<std::string>(), d.at("text").get<std::string>()});
        }
        for (const auto& l : j.at("labels")) {
            const auto text = l.at("text").get<std::string>();
            sc.truth_labels[text] = truth_label_from_string(l.at("label").get<std::string>());
            sc.fact_of[text] = l.value("fact", text);
        }
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed scenario: ") + e.what());
    }
}

RunMetrics evaluate_run(const SyntheticScenario& scenario, std::span<const ClaimNode> validated,
                        const ArbitrationTrace& trace, std::size_t verifier_calls) {
    RunMetrics m;
    std::set<std::string> recovered;
    std::size_t true_nodes = 0;
    for (const auto& n : validated) {
        auto it = scenario.truth_labels.find(n.canonical_text);
        if (it == scenario.truth_labels.end()) {
            throw DataError("no planted label for node " + to_string(n.id) + " '" + n.canonical_text + "'");
        }
        if (it->second == TruthLabel::True) {
            ++true_nodes;
            recovered.insert(scenario.fact_of.at(n.canonical_text));
        }
    }
    const auto total_true = scenario.true_fact_count();
    m.recovery_recall = total_true == 0 ? 1.0 : static_cast<double>(recovered.size()) / static_cast<double>(total_true);
    m.recovery_precision =
        validated.empty() ? 0.0 : static_cast<double>(true_nodes) / static_cast<double>(validated.size());

    std::istringstream tokens(assemble_context(validated));
    std::size_t token_count = 0;
    for (std::string tok; tokens >> tok;) ++token_count;
    m.density = token_count == 0 ? 0.0 : static_cast<double>(recovered.size()) / static_cast<double>(token_count);
    m.arbitration_calls = trace.arbitration_calls();
    m.verifier_calls = verifier_calls;
    return m;
}

ScenarioRun run_scenario(const GeneratedScenario& generated, const PipelineConfig& cfg) {
    const OracleBackend backend(generated.table);
    ScenarioRun run;
    auto graph = build_graph(generated.scenario.query, generated.scenario.documents, backend, cfg, &run.stats);
    auto result = run_arbitration(std::move(graph), backend, cfg, cfg.policy);
    run.graph = std::move(result.graph);
    run.trace = std::move(result.trace);
    run.validated = validated_set(run.graph, cfg.tau_accept);
    run.metrics = evaluate_run(generated.scenario, run.validated, run.trace, run.stats.verifier_calls);
    return run;
}

std::string to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::TauQ: return "tau_q";
    case SweepParameter::MaxSupportEdges: return "M";
    case SweepParameter::BudgetK: return "k";
    case SweepParameter::Policy: return "policy";
    }
    return "M";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
    if (s == "tau_q") return SweepParameter::TauQ;
    if (s == "M") return SweepParameter::MaxSupportEdges;
    if (s == "k") return SweepParameter::BudgetK;
    if (s == "policy") return SweepParameter::Policy;
    throw ConfigError("parameter", "expected one of tau_q, M, k, policy; got '" + s + "'");
}

PipelineConfig apply_grid_value(PipelineConfig cfg, SweepParameter p, const std::string& value) {
    const auto key = to_string(p);
    try {
        std::size_t used = 0;
        switch (p) {
        case SweepParameter::TauQ:
            cfg.tau_q = std::stod(value, &used);
            break;
        case SweepParameter::MaxSupportEdges:
            cfg.max_support_edges = std::stoi(value, &used);
            break;
        case SweepParameter::BudgetK:
            cfg.budget_k = std::stoi(value, &used);
            break;
        case SweepParameter::Policy:
            cfg.policy = policy_from_string(value);
            used = value.size();
            break;
        }
        if (used != value.size()) throw ConfigError(key, "malformed grid value '" + value + "'");
    } catch (const std::logic_error&) {
        throw ConfigError(key, "malformed grid value '" + value + "'");
    }
    cfg.validate();
    return cfg;
}

std::uint64_t derive_seed(std::uint64_t batch_seed, std::uint64_t index) {
    // splitmix64 finalizer over (batch_seed, index)
    std::uint64_t z = batch_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<SweepRow> sweep(const SweepSpec& spec, std::size_t parallelism) {
    if (spec.grid.size() < 3) throw ConfigError("grid", "a sweep needs at least 3 grid points");
    if (spec.scenarios < 5) throw ConfigError("scenarios", "a sweep needs at least 5 scenarios per point");

    std::vector<PipelineConfig> configs;
    for (const auto& v : spec.grid) configs.push_back(apply_grid_value(spec.base, spec.parameter, v));

    std::vector<GeneratedScenario> batch;
    for (int i = 0; i < spec.scenarios; ++i) {
        batch.push_back(generate_scenario(spec.knobs, derive_seed(spec.batch_seed, static_cast<std::uint64_t>(i))));
    }

    const std::size_t per_point = batch.size();
    std::vector<RunMetrics> metrics(configs.size() * per_point);
    parallel_for(metrics.size(), parallelism, [&](std::size_t i) {
        metrics[i] = run_scenario(batch[i % per_point], configs[i / per_point]).metrics;
    });

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < configs.size(); ++g) {
        SweepRow row;
        row.parameter = to_string(spec.parameter);
        row.value = spec.grid[g];
        for (std::size_t s = 0; s < per_point; ++s) {
            const auto& m = metrics[g * per_point + s];
            row.recall_mean += m.recovery_recall;
            row.precision_mean += m.recovery_precision;
            row.density_mean += m.density;
            row.calls_mean += static_cast<double>(m.arbitration_calls);
            row.verifier_calls_mean += static_cast<double>(m.verifier_calls);
            row.recall_precision_mean += m.recall_precision();
        }
        const auto n = static_cast<double>(per_point);
        row.recall_mean /= n;
        row.precision_mean /= n;
        row.density_mean /= n;
        row.calls_mean /= n;
        row.verifier_calls_mean /= n;
        row.recall_precision_mean /= n;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream os;
    os << "parameter,value,recall_mean,precision_mean,density_mean,calls_mean\n";
    os << std::fixed << std::setprecision(6);
    for (const auto& r : rows) {
        os << r.parameter << ',' << r.value << ',' << r.recall_mean << ',' << r.precision_mean << ','
           << r.density_mean << ',' << r.calls_mean << '\n';
    }
    return os.str();
}

Json to_json(std::span<const SweepRow> rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back(Json{{"parameter", r.parameter},
                           {"value", r.value},
                           {"recall_mean", r.recall_mean},
                           {"precision_mean", r.precision_mean},
                           {"density_mean", r.density_mean},
                           {"calls_mean", r.calls_mean},
                           {"verifier_calls_mean", r.verifier_calls_mean},
                           {"recall_precision_mean", r.recall_precision_mean}});
    }
    return arr;
}

ScenarioKnobs default_sweep_knobs(SweepParameter p) {
    ScenarioKnobs k;
    k.conflicts = 6;
    k.uncontested_true = 2;
    k.min_supporters = 2;
    k.max_supporters = 2;
    switch (p) {
    case SweepParameter::MaxSupportEdges:
        k.noisy_supporters = 4;
        break;
    case SweepParameter::TauQ:
        k.homonym_noise = 18;
        k.min_relevance = 0.4;
        k.max_relevance = 0.6;
        break;
    case SweepParameter::BudgetK:
        k.noisy_supporters = 1;
        k.redundant_paraphrases = 4;
        k.arbitrator_error = 0.2;
        break;
    case SweepParameter::Policy:
        k.min_supporters = 1;
        k.redundant_paraphrases = 6;
        k.arbitrator_error = 0.2;
        break;
    }
    return k;
}

std::vector<std::string> default_sweep_grid(SweepParameter p) {
    switch (p) {
    case SweepParameter::MaxSupportEdges: return {"0", "12", "1000"};
    case SweepParameter::TauQ: return {"0", "0.3", "0.5"};
    case SweepParameter::BudgetK: return {"1", "3", "6", "12"};
    case SweepParameter::Policy: return {"conflict-aware", "hard-first", "easy-first"};
    }
    return {};
}

PipelineConfig default_sweep_config(SweepParameter p) {
    PipelineConfig cfg;
    if (p == SweepParameter::Policy) {
        cfg.budget_k = 1;
        cfg.rounds = 3;
    }
    return cfg;
}

}  // namespace arbgraph
