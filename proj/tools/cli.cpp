#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <memory>
#include <set>

#include <CLI11.hpp>

#include "arbgraph/arbitration.hpp"
#include "arbgraph/error.hpp"
#include "arbgraph/graph_builder.hpp"
#include "arbgraph/oracle_backend.hpp"
#include "arbgraph/parallel.hpp"
#include "arbgraph/remote_backend.hpp"
#include "arbgraph/serialization.hpp"
#include "arbgraph/simulation.hpp"

namespace fs = std::filesystem;

namespace arbgraph::cli {

PipelineConfig load_config(const std::optional<fs::path>& file, const ConfigOverrides& flags,
                           PipelineConfig cfg) {
    if (file) {
        Json j;
        try {
            j = Json::parse(read_file(*file));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("<file>", "'" + file->string() + "' is not valid JSON: " + e.what());
        }
        // A manifest or artifact may carry the config under "config".
        if (j.is_object() && j.contains("config") && j.at("config").is_object()) j = j.at("config");
        cfg = config_from_json(j, cfg);
    }
    if (flags.tau_q) cfg.tau_q = *flags.tau_q;
    if (flags.tau_sim) cfg.tau_sim = *flags.tau_sim;
    if (flags.tau_conf) cfg.tau_conf = *flags.tau_conf;
    if (flags.tau_accept) cfg.tau_accept = *flags.tau_accept;
    if (flags.tau_gate) cfg.tau_gate = *flags.tau_gate;
    if (flags.tau_merge) cfg.tau_merge = *flags.tau_merge;
    if (flags.eta) cfg.eta = *flags.eta;
    if (flags.budget_k) cfg.budget_k = *flags.budget_k;
    if (flags.rounds) cfg.rounds = *flags.rounds;
    if (flags.max_support_edges) cfg.max_support_edges = *flags.max_support_edges;
    if (flags.per_pair_cap) cfg.per_pair_cap = *flags.per_pair_cap;
    if (flags.policy) cfg.policy = policy_from_string(*flags.policy);
    if (flags.support_pruning) cfg.support_pruning = support_pruning_from_string(*flags.support_pruning);
    if (flags.seed) cfg.seed = *flags.seed;
    cfg.validate();
    return cfg;
}

namespace {

void append_documents(const fs::path& path, std::vector<Document>& docs) {
    const auto text = read_file(path);
    if (path.extension() != ".json") {
        auto end = text.find_last_not_of(" \t\r\n");
        docs.push_back(Document{path.stem().string(), end == std::string::npos ? "" : text.substr(0, end + 1)});
        return;
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what(), "ingest");
    }
    auto one = [&](const Json& d) {
        if (!d.is_object() || !d.contains("id") || !d.contains("text") || !d.at("id").is_string() ||
            !d.at("text").is_string()) {
            throw DataError("'" + path.string() + "': documents need string fields id and text", "ingest");
        }
        docs.push_back(Document{d.at("id").get<std::string>(), d.at("text").get<std::string>()});
    };
    if (j.is_array()) {
        for (const auto& d : j) one(d);
    } else {
        one(j);
    }
}

}  // namespace

std::vector<Document> load_documents(const std::vector<fs::path>& inputs) {
    std::vector<Document> docs;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(input, ec)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
            if (ec) throw IoError("cannot list '" + input.string() + "': " + ec.message());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) append_documents(f, docs);
        } else if (fs::exists(input, ec)) {
            append_documents(input, docs);
        } else {
            throw IoError("no such file or directory '" + input.string() + "'");
        }
    }
    if (docs.empty()) throw DataError("no documents found in the given inputs", "ingest");
    std::set<std::string> ids;
    for (const auto& d : docs) {
        if (!ids.insert(d.id).second) throw DataError("duplicate document id '" + d.id + "'", "ingest");
    }
    return docs;
}

namespace {

struct Options {
    std::string config_path;
    ConfigOverrides overrides;
    std::string backend = "oracle";
    std::string oracle_table;
    std::string endpoint;
    std::string api_key_env = RemoteConfig{}.api_key_env;
    std::string chat_model = RemoteConfig{}.chat_model;
    std::string embedding_model = RemoteConfig{}.embedding_model;
    int max_in_flight = RemoteConfig{}.max_in_flight;
    std::string out = "out";
    std::vector<std::string> exports{"json", "dot"};
    std::size_t jobs = 0;

    std::string query;
    std::string query_file;
    std::vector<std::string> inputs;
    std::string pool;
    std::string graph;

    std::string parameter = "M";
    std::vector<std::string> grid;
    int scenarios = 5;
    std::uint64_t batch_seed = 0;
    std::string knobs;

    std::string preset = "eas";
};

void add_config_flags(CLI::App* app, Options& o) {
    auto& f = o.overrides;
    app->add_option("--config", o.config_path, "JSON config file (flags take precedence)");
    app->add_option("--tau-q", f.tau_q, "Query relevance threshold");
    app->add_option("--tau-sim", f.tau_sim, "Candidate similarity threshold");
    app->add_option("--tau-conf", f.tau_conf, "Edge confidence threshold");
    app->add_option("--tau-accept", f.tau_accept, "Acceptance threshold");
    app->add_option("--tau-gate", f.tau_gate, "Arbitration gate threshold");
    app->add_option("--tau-merge", f.tau_merge, "Duplicate merge threshold");
    app->add_option("--eta", f.eta, "Logit step size");
    app->add_option("--budget-k", f.budget_k, "Arbitrations per round");
    app->add_option("--rounds", f.rounds, "Arbitration rounds");
    app->add_option("--max-support-edges", f.max_support_edges, "Support edges kept after pruning");
    app->add_option("--per-pair-cap", f.per_pair_cap, "Decisive arbitrations allowed per pair");
    app->add_option("--policy", f.policy, "conflict-aware | hard-first | easy-first");
    app->add_option("--support-pruning", f.support_pruning, "global | per-node");
    app->add_option("--seed", f.seed, "Seed recorded with every artifact");
}

void add_backend_flags(CLI::App* app, Options& o) {
    app->add_option("--backend", o.backend, "oracle | remote")->check(CLI::IsMember({"oracle", "remote"}));
    app->add_option("--oracle-table", o.oracle_table, "Oracle table JSON");
    app->add_option("--endpoint", o.endpoint, "Base URL of an OpenAI-compatible API");
    app->add_option("--api-key-env", o.api_key_env, "Environment variable holding the API key");
    app->add_option("--model", o.chat_model, "Chat model name");
    app->add_option("--embedding-model", o.embedding_model, "Embedding model name");
    app->add_option("--max-in-flight", o.max_in_flight, "Concurrent remote requests");
}

void add_output_flags(CLI::App* app, Options& o, bool formats) {
    app->add_option("--out", o.out, "Output directory");
    if (formats) {
        app->add_option("--export", o.exports, "Graph formats: json, dot, csv")
            ->delimiter(',')
            ->check(CLI::IsMember({"json", "dot", "csv"}));
    }
    app->add_option("--jobs", o.jobs, "Worker threads (0 = hardware)");
}

void add_input_flags(CLI::App* app, Options& o) {
    app->add_option("--query", o.query, "Query text");
    app->add_option("--query-file", o.query_file, "File holding the query text");
    app->add_option("docs", o.inputs, "Document files or directories");
}

std::size_t workers(const Options& o) { return o.jobs == 0 ? default_parallelism() : o.jobs; }

PipelineConfig effective_config(const Options& o) {
    std::optional<fs::path> file;
    if (!o.config_path.empty()) file = o.config_path;
    return load_config(file, o.overrides);
}

std::unique_ptr<Backend> make_backend(const Options& o) {
    if (o.backend == "oracle") {
        if (o.oracle_table.empty()) throw ConfigError("oracle-table", "the oracle backend needs --oracle-table");
        return std::make_unique<OracleBackend>(oracle_table_from_json(read_json_file(o.oracle_table)));
    }
    if (o.endpoint.empty()) throw ConfigError("endpoint", "the remote backend needs --endpoint");
    RemoteConfig rc;
    rc.endpoint = o.endpoint;
    rc.api_key_env = o.api_key_env;
    rc.chat_model = o.chat_model;
    rc.embedding_model = o.embedding_model;
    rc.max_in_flight = o.max_in_flight;
    return std::make_unique<RemoteBackend>(rc, make_http_transport(rc));
}

Json backend_json(const Options& o) {
    Json j;
    j["backend"] = o.backend;
    if (o.backend == "oracle") {
        j["oracle_table"] = o.oracle_table;
    } else {
        j["endpoint"] = o.endpoint;
        j["api_key_env"] = o.api_key_env;
        j["model"] = o.chat_model;
        j["embedding_model"] = o.embedding_model;
    }
    return j;
}

std::string query_text(const Options& o) {
    if (!o.query.empty() && !o.query_file.empty()) {
        throw ConfigError("query", "give either --query or --query-file, not both");
    }
    if (!o.query_file.empty()) {
        auto q = read_file(o.query_file);
        q.erase(q.find_last_not_of(" \t\r\n") + 1);
        return q;
    }
    if (o.query.empty()) throw ConfigError("query", "a query is required (--query or --query-file)");
    return o.query;
}

std::vector<Document> documents(const Options& o) {
    if (o.inputs.empty()) throw ConfigError("docs", "at least one document path is required");
    std::vector<fs::path> paths(o.inputs.begin(), o.inputs.end());
    return load_documents(paths);
}

Json with_config(Json artifact, const PipelineConfig& cfg) {
    artifact["config"] = to_json(cfg);
    return artifact;
}

std::string config_line(const PipelineConfig& cfg) { return "config " + to_json(cfg).dump(); }

bool wants(const Options& o, const std::string& format) {
    return std::find(o.exports.begin(), o.exports.end(), format) != o.exports.end();
}

void write_graph(const Options& o, const EvidenceGraph& g, const PipelineConfig& cfg, const std::string& stem,
                 std::ostream& out) {
    const fs::path dir = o.out;
    if (wants(o, "json")) write_file(dir / (stem + ".json"), dump(with_config(to_json(g), cfg)));
    if (wants(o, "dot")) write_file(dir / (stem + ".dot"), to_dot(g, config_line(cfg)));
    if (wants(o, "csv")) write_file(dir / (stem + "_edges.csv"), "# " + config_line(cfg) + "\n" + edges_to_csv(g));
    out << "wrote " << (dir / stem).string() << " [";
    for (std::size_t i = 0; i < o.exports.size(); ++i) out << (i ? "," : "") << o.exports[i];
    out << "]\n";
}

void print_graph_summary(const EvidenceGraph& g, std::ostream& out) {
    out << "nodes=" << g.nodes.size() << " support_edges=" << g.support_edges.size()
        << " contradiction_edges=" << g.contradiction_edges.size() << "\n";
}

std::vector<std::string> context_header(const PipelineConfig& cfg, const std::string& query) {
    return {"query " + query, config_line(cfg)};
}

struct ArbitrationOutputs {
    ArbitrationResult result;
    std::vector<ClaimNode> validated;
};

ArbitrationOutputs arbitrate_and_write(const Options& o, EvidenceGraph graph, const Backend& backend,
                                       const PipelineConfig& cfg, std::ostream& out) {
    ArbitrationOutputs r;
    try {
        r.result = run_arbitration(std::move(graph), backend, cfg, cfg.policy, workers(o));
    } catch (const Error& e) {
        rethrow_with_stage(e, "arbitrate");
    }
    r.validated = validated_set(r.result.graph, cfg.tau_accept);
    const fs::path dir = o.out;
    write_file(dir / "trace.json", dump(with_config(to_json(r.result.trace), cfg)));
    write_graph(o, r.result.graph, cfg, "graph", out);
    write_file(dir / "context.txt", assemble_context(r.validated, context_header(cfg, r.result.graph.query)));
    print_graph_summary(r.result.graph, out);
    out << "rounds_used=" << r.result.trace.rounds.size() << " arbitration_calls=" << r.result.trace.arbitration_calls()
        << " decisive_updates=" << r.result.trace.decisive_updates() << " validated=" << r.validated.size()
        << " status=" << (r.result.trace.converged ? "converged" : "budget-exhausted") << "\n";
    return r;
}

int cmd_ingest(const Options& o, std::ostream& out) {
    const auto cfg = effective_config(o);
    const auto backend = make_backend(o);
    const auto docs = documents(o);
    const auto pool = ingest_documents(query_text(o), docs, *backend);
    const auto path = fs::path(o.out) / "claim_pool.json";
    Json j = with_config(to_json(pool), cfg);
    j["provenance"] = backend_json(o);
    write_file(path, dump(j));
    out << "documents=" << docs.size() << " claims=" << pool.claims.size() << "\nwrote " << path.string() << "\n";
    return kOk;
}

int cmd_build(const Options& o, std::ostream& out) {
    const auto cfg = effective_config(o);
    const auto backend = make_backend(o);
    ClaimPool pool;
    if (!o.pool.empty()) {
        if (!o.inputs.empty()) throw ConfigError("pool", "give either --pool or document paths, not both");
        pool = pool_from_json(read_json_file(o.pool));
    } else {
        pool = ingest_documents(query_text(o), documents(o), *backend);
    }
    BuildStats stats;
    const auto g = build_graph_from_pool(pool, *backend, cfg, &stats, workers(o));
    write_graph(o, g, cfg, "graph", out);
    out << "claims=" << stats.claims << " normalized=" << stats.normalized_nodes << " retained=" << stats.retained_nodes
        << " candidate_pairs=" << stats.candidate_pairs << " verifier_calls=" << stats.verifier_calls << "\n";
    print_graph_summary(g, out);
    return kOk;
}

int cmd_arbitrate(const Options& o, std::ostream& out) {
    if (o.graph.empty()) throw ConfigError("graph", "--graph is required");
    const auto cfg = effective_config(o);
    const auto backend = make_backend(o);
    auto graph = graph_from_json(read_json_file(o.graph));
    const auto r = arbitrate_and_write(o, std::move(graph), *backend, cfg, out);
    return r.result.trace.converged ? kOk : kBudgetExhausted;
}

int cmd_run(const Options& o, std::ostream& out) {
    const auto cfg = effective_config(o);
    const auto backend = make_backend(o);
    const auto query = query_text(o);
    const auto docs = documents(o);
    BuildStats stats;
    auto graph = build_graph(query, docs, *backend, cfg, &stats, workers(o));
    const fs::path dir = o.out;
    write_file(dir / "initial_graph.json", dump(with_config(to_json(graph), cfg)));
    const auto r = arbitrate_and_write(o, std::move(graph), *backend, cfg, out);

    Json manifest;
    manifest["query"] = query;
    Json doc_ids = Json::array();
    for (const auto& d : docs) doc_ids.push_back(d.id);
    manifest["documents"] = std::move(doc_ids);
    manifest["inputs"] = o.inputs;
    manifest["provenance"] = backend_json(o);
    manifest["config"] = to_json(cfg);
    manifest["stats"] = Json{{"documents", stats.documents},
                             {"claims", stats.claims},
                             {"normalized_nodes", stats.normalized_nodes},
                             {"retained_nodes", stats.retained_nodes},
                             {"candidate_pairs", stats.candidate_pairs},
                             {"verifier_calls", stats.verifier_calls},
                             {"support_before_pruning", stats.support_before_pruning},
                             {"rounds_used", r.result.trace.rounds.size()},
                             {"arbitration_calls", r.result.trace.arbitration_calls()},
                             {"validated", r.validated.size()},
                             {"converged", r.result.trace.converged}};
    write_file(dir / "manifest.json", dump(manifest));
    out << "wrote " << dir.string() << "\n";
    return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    SweepSpec spec;
    spec.parameter = sweep_parameter_from_string(o.parameter);
    spec.grid = o.grid.empty() ? default_sweep_grid(spec.parameter) : o.grid;
    spec.knobs = default_sweep_knobs(spec.parameter);
    if (!o.knobs.empty()) {
        const auto j = read_json_file(o.knobs);
        spec.knobs = knobs_from_json(j.contains("knobs") ? j.at("knobs") : j, spec.knobs);
    }
    spec.scenarios = o.scenarios;
    spec.batch_seed = o.batch_seed;
    std::optional<fs::path> file;
    if (!o.config_path.empty()) file = o.config_path;
    spec.base = load_config(file, o.overrides, default_sweep_config(spec.parameter));

    const auto rows = sweep(spec, workers(o));
    const fs::path dir = o.out;
    write_file(dir / "sweep.csv", sweep_csv(rows));
    Json j;
    j["parameter"] = to_string(spec.parameter);
    j["grid"] = spec.grid;
    j["scenarios"] = spec.scenarios;
    j["batch_seed"] = spec.batch_seed;
    j["knobs"] = to_json(spec.knobs);
    j["config"] = to_json(spec.base);
    j["rows"] = to_json(rows);
    write_file(dir / "sweep.json", dump(j));
    out << sweep_csv(rows) << "wrote " << (dir / "sweep.csv").string() << "\n";
    return kOk;
}

int cmd_export(const Options& o, std::ostream& out) {
    if (o.graph.empty()) throw ConfigError("graph", "--graph is required");
    const auto j = read_json_file(o.graph);
    const auto g = graph_from_json(j);
    // Keep the provenance the graph was written with unless flags say otherwise.
    PipelineConfig base;
    if (j.contains("config")) base = config_from_json(j.at("config"));
    std::optional<fs::path> file;
    if (!o.config_path.empty()) file = o.config_path;
    const auto cfg = load_config(file, o.overrides, base);
    write_graph(o, g, cfg, fs::path(o.graph).stem().string(), out);
    return kOk;
}

int cmd_preset(const Options& o, std::ostream& out) {
    GeneratedScenario gen;
    if (o.preset == "eas") {
        gen = eas_preset();
    } else if (o.preset == "synthetic") {
        auto knobs = ScenarioKnobs{};
        if (!o.knobs.empty()) {
            const auto j = read_json_file(o.knobs);
            knobs = knobs_from_json(j.contains("knobs") ? j.at("knobs") : j);
        }
        gen = generate_scenario(knobs, o.batch_seed);
    } else {
        throw ConfigError("name", "expected eas or synthetic");
    }
    const fs::path dir = o.out;
    for (const auto& d : gen.scenario.documents) write_file(dir / "docs" / (d.id + ".txt"), d.text + "\n");
    write_file(dir / "query.txt", gen.scenario.query + "\n");
    write_file(dir / "oracle_table.json", dump(to_json(gen.table)));
    write_file(dir / "scenario.json", dump(to_json(gen.scenario)));
    out << "documents=" << gen.scenario.documents.size() << "\nwrote " << dir.string() << "\n";
    return kOk;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Data: return kDataError;
    case ErrorKind::Config: return kConfigError;
    case ErrorKind::Backend: return kBackendError;
    case ErrorKind::Io: return kIoError;
    }
    return kDataError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"arbgraph: evidence graph construction and credibility arbitration"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Extract and embed claims from documents");
    add_input_flags(ingest, o);
    add_backend_flags(ingest, o);
    add_config_flags(ingest, o);
    add_output_flags(ingest, o, false);

    auto* build = app.add_subcommand("build", "Build the evidence graph");
    add_input_flags(build, o);
    build->add_option("--pool", o.pool, "Claim pool written by ingest");
    add_backend_flags(build, o);
    add_config_flags(build, o);
    add_output_flags(build, o, true);

    auto* arbitrate = app.add_subcommand("arbitrate", "Run credibility arbitration on a graph");
    arbitrate->add_option("--graph", o.graph, "Graph JSON written by build");
    add_backend_flags(arbitrate, o);
    add_config_flags(arbitrate, o);
    add_output_flags(arbitrate, o, true);

    auto* run_cmd = app.add_subcommand("run", "Build, arbitrate and assemble the validated context");
    add_input_flags(run_cmd, o);
    add_backend_flags(run_cmd, o);
    add_config_flags(run_cmd, o);
    add_output_flags(run_cmd, o, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over synthetic scenarios");
    sweep_cmd->add_option("--parameter", o.parameter, "tau_q | M | k | policy");
    sweep_cmd->add_option("--grid", o.grid, "Comma-separated grid values")->delimiter(',');
    sweep_cmd->add_option("--scenarios", o.scenarios, "Scenarios per grid point");
    sweep_cmd->add_option("--batch-seed", o.batch_seed, "Seed for the scenario batch");
    sweep_cmd->add_option("--knobs", o.knobs, "Scenario knobs JSON");
    add_config_flags(sweep_cmd, o);
    add_output_flags(sweep_cmd, o, false);

    auto* export_cmd = app.add_subcommand("export", "Convert a graph JSON to other formats");
    export_cmd->add_option("--graph", o.graph, "Graph JSON");
    add_config_flags(export_cmd, o);
    add_output_flags(export_cmd, o, true);

    auto* preset = app.add_subcommand("preset", "Write a scenario as documents plus an oracle table");
    preset->add_option("--name", o.preset, "eas | synthetic");
    preset->add_option("--batch-seed", o.batch_seed, "Generator seed (synthetic)");
    preset->add_option("--knobs", o.knobs, "Scenario knobs JSON (synthetic)");
    preset->add_option("--out", o.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (*ingest) return cmd_ingest(o, out);
        if (*build) return cmd_build(o, out);
        if (*arbitrate) return cmd_arbitrate(o, out);
        if (*run_cmd) return cmd_run(o, out);
        if (*sweep_cmd) return cmd_sweep(o, out);
        if (*export_cmd) return cmd_export(o, out);
        if (*preset) return cmd_preset(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kOk;
}

}  // namespace arbgraph::cli
