#include "arbgraph/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "arbgraph/error.hpp"

namespace arbgraph {

namespace {

template <typename T>
T config_value(const Json& j, const std::string& key) {
    try {
        if constexpr (std::is_floating_point_v<T>) {
            if (!j.is_number()) throw ConfigError(key, "expected a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!j.is_string()) throw ConfigError(key, "expected a string");
        } else {
            if (!j.is_number_integer() && !j.is_number_unsigned()) {
                throw ConfigError(key, "expected an integer");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (j.is_number_integer() && j.get<std::int64_t>() < 0) {
                    throw ConfigError(key, "expected a non-negative integer");
                }
            }
        }
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

const Json& require(const Json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key)) {
        throw DataError(context + ": missing field '" + key + "'");
    }
    return j.at(key);
}

std::string format_probability(double p) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << p;
    return os.str();
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

Json to_json(const PipelineConfig& cfg) {
    Json j;
    j["tau_q"] = cfg.tau_q;
    j["tau_sim"] = cfg.tau_sim;
    j["tau_conf"] = cfg.tau_conf;
    j["tau_accept"] = cfg.tau_accept;
    j["tau_gate"] = cfg.tau_gate;
    j["tau_merge"] = cfg.tau_merge;
    j["eta"] = cfg.eta;
    j["budget_k"] = cfg.budget_k;
    j["max_support_edges"] = cfg.max_support_edges;
    j["rounds"] = cfg.rounds;
    j["per_pair_cap"] = cfg.per_pair_cap;
    j["seed"] = cfg.seed;
    j["policy"] = to_string(cfg.policy);
    j["support_pruning"] = to_string(cfg.support_pruning);
    return j;
}

PipelineConfig config_from_json(const Json& j, PipelineConfig base) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "tau_q") base.tau_q = config_value<double>(value, key);
        else if (key == "tau_sim") base.tau_sim = config_value<double>(value, key);
        else if (key == "tau_conf") base.tau_conf = config_value<double>(value, key);
        else if (key == "tau_accept") base.tau_accept = config_value<double>(value, key);
        else if (key == "tau_gate") base.tau_gate = config_value<double>(value, key);
        else if (key == "tau_merge") base.tau_merge = config_value<double>(value, key);
        else if (key == "eta") base.eta = config_value<double>(value, key);
        else if (key == "budget_k") base.budget_k = config_value<int>(value, key);
        else if (key == "max_support_edges") base.max_support_edges = config_value<int>(value, key);
        else if (key == "rounds") base.rounds = config_value<int>(value, key);
        else if (key == "per_pair_cap") base.per_pair_cap = config_value<int>(value, key);
        else if (key == "seed") base.seed = config_value<std::uint64_t>(value, key);
        else if (key == "policy") base.policy = policy_from_string(config_value<std::string>(value, key));
        else if (key == "support_pruning") {
            base.support_pruning = support_pruning_from_string(config_value<std::string>(value, key));
        } else {
            throw ConfigError(key, "unknown configuration key");
        }
    }
    base.validate();
    return base;
}

Json to_json(const ClaimPool& pool) {
    Json j;
    j["query"] = pool.query;
    if (pool.query_embedding) j["query_embedding"] = *pool.query_embedding;
    Json claims = Json::array();
    for (const auto& c : pool.claims) {
        Json cj;
        cj["id"] = c.id;
        cj["text"] = c.text;
        cj["source_doc"] = c.source_doc;
        cj["entities"] = c.entities;
        if (c.embedding) cj["embedding"] = *c.embedding;
        claims.push_back(std::move(cj));
    }
    j["claims"] = std::move(claims);
    return j;
}

ClaimPool pool_from_json(const Json& j) {
    try {
        ClaimPool pool;
        pool.query = require(j, "query", "claim pool").get<std::string>();
        if (j.contains("query_embedding")) pool.query_embedding = j.at("query_embedding").get<Embedding>();
        for (const auto& cj : require(j, "claims", "claim pool")) {
            AtomicClaim c;
            c.id = require(cj, "id", "claim").get<std::string>();
            c.text = require(cj, "text", "claim '" + c.id + "'").get<std::string>();
            c.source_doc = require(cj, "source_doc", "claim '" + c.id + "'").get<std::string>();
            if (cj.contains("entities")) c.entities = cj.at("entities").get<EntitySet>();
            if (cj.contains("embedding")) c.embedding = cj.at("embedding").get<Embedding>();
            if (c.text.empty()) throw DataError("claim '" + c.id + "' has empty text");
            pool.claims.push_back(std::move(c));
        }
        return pool;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed claim pool: ") + e.what());
    }
}

Json to_json(const ClaimNode& node) {
    Json j;
    j["id"] = to_string(node.id);
    j["canonical_text"] = node.canonical_text;
    j["members"] = node.members;
    j["sources"] = node.sources;
    j["entities"] = node.entities;
    j["logit"] = node.logit;
    j["p"] = node.probability();
    Json resolved = Json::object();
    for (const auto& [other, count] : node.resolved_pairs) resolved[to_string(other)] = count;
    j["resolved_pairs"] = std::move(resolved);
    return j;
}

Json to_json(const Edge& edge) {
    Json j;
    j["a"] = to_string(edge.a);
    j["b"] = to_string(edge.b);
    j["kind"] = to_string(edge.kind);
    j["confidence"] = edge.confidence;
    j["similarity"] = edge.similarity;
    return j;
}

Json to_json(const EvidenceGraph& graph) {
    Json j;
    j["query"] = graph.query;
    Json nodes = Json::array();
    for (const auto& [id, node] : graph.nodes) nodes.push_back(to_json(node));
    j["nodes"] = std::move(nodes);
    Json edges = Json::array();
    for (const auto& e : graph.support_edges) edges.push_back(to_json(e));
    for (const auto& e : graph.contradiction_edges) edges.push_back(to_json(e));
    j["edges"] = std::move(edges);
    return j;
}

namespace {

bool edge_order(const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
}

}  // namespace

EvidenceGraph graph_from_json(const Json& j) {
    try {
        EvidenceGraph g;
        g.query = require(j, "query", "graph").get<std::string>();
        for (const auto& nj : require(j, "nodes", "graph")) {
            ClaimNode n;
            n.id = node_id_from_string(require(nj, "id", "node").get<std::string>());
            const auto ctx = "node " + to_string(n.id);
            n.canonical_text = require(nj, "canonical_text", ctx).get<std::string>();
            n.members = require(nj, "members", ctx).get<std::vector<std::string>>();
            n.sources = require(nj, "sources", ctx).get<std::set<std::string>>();
            n.entities = nj.value("entities", EntitySet{});
            n.logit = require(nj, "logit", ctx).get<double>();
            if (nj.contains("resolved_pairs")) {
                for (const auto& [other, count] : nj.at("resolved_pairs").items()) {
                    n.resolved_pairs[node_id_from_string(other)] = count.get<int>();
                }
            }
            if (n.members.empty()) throw DataError(ctx + " has no members");
            const auto id = n.id;
            if (!g.nodes.emplace(id, std::move(n)).second) {
                throw DataError("duplicate node id " + to_string(id));
            }
        }
        for (const auto& ej : require(j, "edges", "graph")) {
            Edge e;
            e.a = node_id_from_string(require(ej, "a", "edge").get<std::string>());
            e.b = node_id_from_string(require(ej, "b", "edge").get<std::string>());
            e.kind = edge_kind_from_string(require(ej, "kind", "edge").get<std::string>());
            e.confidence = require(ej, "confidence", "edge").get<double>();
            e.similarity = require(ej, "similarity", "edge").get<double>();
            if (e.b < e.a) std::swap(e.a, e.b);
            if (e.a == e.b) throw DataError("self-loop edge on " + to_string(e.a));
            if (!g.nodes.contains(e.a) || !g.nodes.contains(e.b)) {
                throw DataError("edge endpoint " + to_string(e.a) + "-" + to_string(e.b) + " not in node set");
            }
            (e.kind == EdgeKind::Support ? g.support_edges : g.contradiction_edges).push_back(e);
        }
        std::sort(g.support_edges.begin(), g.support_edges.end(), edge_order);
        std::sort(g.contradiction_edges.begin(), g.contradiction_edges.end(), edge_order);
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed graph: ") + e.what());
    }
}

std::string to_dot(const EvidenceGraph& graph, const std::string& header_comment) {
    constexpr std::size_t kLabelChars = 40;
    std::ostringstream os;
    if (!header_comment.empty()) os << "// " << header_comment << "\n";
    os << "graph evidence {\n";
    os << "  label=\"" << dot_escape(graph.query) << "\";\n";
    for (const auto& [id, node] : graph.nodes) {
        std::string text = node.canonical_text;
        if (text.size() > kLabelChars) text = text.substr(0, kLabelChars - 3) + "...";
        os << "  " << to_string(id) << " [label=\"" << dot_escape(text) << "\\np="
           << format_probability(node.probability()) << "\"];\n";
    }
    for (const auto& e : graph.support_edges) {
        os << "  " << to_string(e.a) << " -- " << to_string(e.b) << " [style=solid];\n";
    }
    for (const auto& e : graph.contradiction_edges) {
        os << "  " << to_string(e.a) << " -- " << to_string(e.b) << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

std::string edges_to_csv(const EvidenceGraph& graph) {
    std::ostringstream os;
    os << "a,b,kind,confidence,similarity\n";
    os << std::setprecision(17);
    auto row = [&](const Edge& e) {
        os << to_string(e.a) << ',' << to_string(e.b) << ',' << to_string(e.kind) << ',' << e.confidence
           << ',' << e.similarity << '\n';
    };
    for (const auto& e : graph.support_edges) row(e);
    for (const auto& e : graph.contradiction_edges) row(e);
    return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace arbgraph
