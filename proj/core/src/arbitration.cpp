#include "arbgraph/arbitration.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <tuple>

#include "arbgraph/error.hpp"
#include "arbgraph/parallel.hpp"

namespace arbgraph {

double intensity(double p_i, double p_j) { return (p_i + p_j) / (1.0 + std::abs(p_i - p_j)); }

double ActivePair::gap() const { return std::abs(p_a - p_b); }

namespace {

bool by_endpoints(const ActivePair& x, const ActivePair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); }

int decisive_count(const EvidenceGraph& g, NodeId a, NodeId b) {
    const auto& counts = g.node(a).resolved_pairs;
    auto it = counts.find(b);
    return it == counts.end() ? 0 : it->second;
}

}  // namespace

std::vector<ActivePair> mine_active(const EvidenceGraph& graph, double tau_accept, int per_pair_cap) {
    std::vector<ActivePair> active;
    for (const auto& e : graph.contradiction_edges) {
        const double p_a = graph.node(e.a).probability();
        const double p_b = graph.node(e.b).probability();
        if (p_a > tau_accept + kThresholdSlack && p_b > tau_accept + kThresholdSlack &&
            decisive_count(graph, e.a, e.b) < per_pair_cap) {
            active.push_back(ActivePair{e.a, e.b, p_a, p_b, intensity(p_a, p_b)});
        }
    }
    std::stable_sort(active.begin(), active.end(), [](const ActivePair& x, const ActivePair& y) {
        if (x.intensity != y.intensity) return x.intensity > y.intensity;
        return by_endpoints(x, y);
    });
    return active;
}

std::vector<ActivePair> select_top_k(std::span<const ActivePair> active, int k, SchedulingPolicy policy) {
    std::vector<ActivePair> ordered(active.begin(), active.end());
    auto cmp = [policy](const ActivePair& x, const ActivePair& y) {
        switch (policy) {
        case SchedulingPolicy::ConflictAware:
            if (x.intensity != y.intensity) return x.intensity > y.intensity;
            break;
        case SchedulingPolicy::HardFirst:
            if (x.gap() != y.gap()) return x.gap() < y.gap();
            break;
        case SchedulingPolicy::EasyFirst:
            if (x.gap() != y.gap()) return x.gap() > y.gap();
            break;
        }
        return by_endpoints(x, y);
    };
    std::sort(ordered.begin(), ordered.end(), cmp);
    if (k >= 0 && ordered.size() > static_cast<std::size_t>(k)) ordered.resize(static_cast<std::size_t>(k));
    return ordered;
}

std::vector<ClaimNode> supporting_context(const EvidenceGraph& graph, NodeId a, NodeId b) {
    std::set<NodeId> ids;
    for (auto id : graph.support_neighbors(a)) ids.insert(id);
    for (auto id : graph.support_neighbors(b)) ids.insert(id);
    ids.erase(a);
    ids.erase(b);
    std::vector<ClaimNode> nodes;
    nodes.reserve(ids.size());
    for (auto id : ids) nodes.push_back(graph.node(id));
    return rank_context(nodes);
}

std::vector<LogitUpdate> apply_update(EvidenceGraph& graph, const ArbitrationVerdict& verdict, double eta) {
    auto& winner = graph.node(verdict.winner);
    auto& loser = graph.node(verdict.loser);
    if (verdict.winner == verdict.loser) throw DataError("verdict winner equals loser");
    if (!graph.has_contradiction(verdict.winner, verdict.loser)) {
        throw DataError("no contradiction edge between " + to_string(verdict.winner) + " and " +
                        to_string(verdict.loser));
    }
    if (verdict.gate_w != 1) return {};
    std::vector<LogitUpdate> updates{{winner.id, winner.logit, winner.logit + eta},
                                     {loser.id, loser.logit, loser.logit - eta}};
    winner.logit = updates[0].new_logit;
    loser.logit = updates[1].new_logit;
    ++winner.resolved_pairs[loser.id];
    ++loser.resolved_pairs[winner.id];
    return updates;
}

std::size_t ArbitrationTrace::arbitration_calls() const {
    std::size_t n = 0;
    for (const auto& r : rounds) n += r.decisions.size();
    return n;
}

std::size_t ArbitrationTrace::decisive_updates() const {
    std::size_t n = 0;
    for (const auto& r : rounds) {
        for (const auto& d : r.decisions) n += d.verdict.gate_w == 1 ? 1 : 0;
    }
    return n;
}

ArbitrationResult run_arbitration(EvidenceGraph graph, const Backend& backend, const PipelineConfig& cfg,
                                  SchedulingPolicy policy, std::size_t parallelism) {
    cfg.validate();
    ArbitrationTrace trace;
    trace.eta = cfg.eta;
    trace.policy = policy;

    for (int round = 1; round <= cfg.rounds; ++round) {
        const EvidenceGraph snapshot = graph;
        auto mined = mine_active(snapshot, cfg.tau_accept, cfg.per_pair_cap);
        if (mined.empty()) break;

        RoundRecord record;
        record.round = round;
        record.selected = select_top_k(mined, cfg.budget_k, policy);
        record.mined = std::move(mined);

        std::vector<std::vector<ClaimNode>> contexts(record.selected.size());
        std::vector<ArbitrationVerdict> verdicts(record.selected.size());
        parallel_for(record.selected.size(), parallelism, [&](std::size_t i) {
            const auto& pair = record.selected[i];
            contexts[i] = supporting_context(snapshot, pair.a, pair.b);
            verdicts[i] = backend.arbitrate(snapshot.node(pair.a), snapshot.node(pair.b), contexts[i], cfg.tau_gate);
            const auto& v = verdicts[i];
            const bool endpoints_match = (v.winner == pair.a && v.loser == pair.b) ||
                                         (v.winner == pair.b && v.loser == pair.a);
            if (!endpoints_match) throw BackendError("arbitrator returned a verdict for a different pair", "arbitrate");
            if (v.gate_w == 1 && v.confidence < cfg.tau_gate) {
                throw BackendError("arbitrator opened the gate below tau_gate", "arbitrate");
            }
        });

        for (std::size_t i = 0; i < record.selected.size(); ++i) {
            PairDecision d;
            d.pair = record.selected[i];
            for (const auto& c : contexts[i]) d.context.push_back(c.id);
            d.verdict = verdicts[i];
            d.updates = apply_update(graph, verdicts[i], cfg.eta);
            record.decisions.push_back(std::move(d));
        }
        trace.rounds.push_back(std::move(record));
    }
    trace.converged = mine_active(graph, cfg.tau_accept, cfg.per_pair_cap).empty();
    return ArbitrationResult{std::move(graph), std::move(trace)};
}

ArbitrationResult run_arbitration(EvidenceGraph graph, const Backend& backend, const PipelineConfig& cfg) {
    return run_arbitration(std::move(graph), backend, cfg, cfg.policy);
}

EvidenceGraph replay_trace(EvidenceGraph initial, const ArbitrationTrace& trace) {
    for (const auto& round : trace.rounds) {
        for (const auto& d : round.decisions) {
            for (const auto& u : d.updates) {
                if (initial.node(u.node).logit != u.old_logit) {
                    throw DataError("trace diverges at round " + std::to_string(round.round) + " on node " +
                                    to_string(u.node));
                }
            }
            apply_update(initial, d.verdict, trace.eta);
        }
    }
    return initial;
}

std::vector<ClaimNode> validated_set(const EvidenceGraph& graph, double tau_accept) {
    std::vector<ClaimNode> out;
    for (const auto& [id, node] : graph.nodes) {
        if (node.probability() >= tau_accept - kThresholdSlack) out.push_back(node);
    }
    std::stable_sort(out.begin(), out.end(), [](const ClaimNode& x, const ClaimNode& y) {
        if (x.logit != y.logit) return x.logit > y.logit;
        return x.id < y.id;
    });
    return out;
}

std::string assemble_context(std::span<const ClaimNode> validated, std::span<const std::string> header_lines) {
    std::ostringstream os;
    os << kContextHeader << "\n";
    for (const auto& h : header_lines) os << "# " << h << "\n";
    if (validated.empty()) {
        os << kNoEvidenceMarker << "\n";
        return os.str();
    }
    int i = 1;
    for (const auto& n : validated) {
        os << i++ << ". [" << to_string(n.id) << "] " << n.canonical_text << " (p=" << std::fixed
           << std::setprecision(3) << n.probability() << "; sources: ";
        bool first = true;
        for (const auto& s : n.sources) {
            os << (first ? "" : ", ") << s;
            first = false;
        }
        os << ")\n";
    }
    return os.str();
}

std::vector<NodeId> parse_context_ids(const std::string& context) {
    std::vector<NodeId> ids;
    std::istringstream in(context);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == kNoEvidenceMarker) continue;
        const auto open = line.find(". [");
        const auto close = line.find(']', open == std::string::npos ? 0 : open);
        if (open == std::string::npos || close == std::string::npos) {
            throw DataError("unrecognized context line: " + line);
        }
        ids.push_back(node_id_from_string(line.substr(open + 3, close - open - 3)));
    }
    return ids;
}

namespace {

Json pair_json(const ActivePair& p) {
    return Json{{"a", to_string(p.a)},
                {"b", to_string(p.b)},
                {"p_a", p.p_a},
                {"p_b", p.p_b},
                {"intensity", p.intensity}};
}

ActivePair pair_from_json(const Json& j) {
    return ActivePair{node_id_from_string(j.at("a").get<std::string>()),
                      node_id_from_string(j.at("b").get<std::string>()), j.at("p_a").get<double>(),
                      j.at("p_b").get<double>(), j.at("intensity").get<double>()};
}

}  // namespace

Json to_json(const ArbitrationTrace& trace) {
    Json j;
    j["eta"] = trace.eta;
    j["policy"] = to_string(trace.policy);
    j["converged"] = trace.converged;
    j["rounds_used"] = trace.rounds.size();
    Json rounds = Json::array();
    for (const auto& r : trace.rounds) {
        Json rj;
        rj["round"] = r.round;
        rj["mined"] = Json::array();
        for (const auto& p : r.mined) rj["mined"].push_back(pair_json(p));
        rj["selected"] = Json::array();
        for (const auto& p : r.selected) rj["selected"].push_back(pair_json(p));
        rj["decisions"] = Json::array();
        for (const auto& d : r.decisions) {
            Json dj;
            dj["pair"] = pair_json(d.pair);
            dj["context"] = Json::array();
            for (auto id : d.context) dj["context"].push_back(to_string(id));
            dj["verdict"] = Json{{"winner", to_string(d.verdict.winner)},
                                 {"loser", to_string(d.verdict.loser)},
                                 {"gate_w", d.verdict.gate_w},
                                 {"confidence", d.verdict.confidence}};
            dj["deltas"] = Json::array();
            for (const auto& u : d.updates) {
                dj["deltas"].push_back(
                    Json{{"node", to_string(u.node)}, {"old_logit", u.old_logit}, {"new_logit", u.new_logit}});
            }
            rj["decisions"].push_back(std::move(dj));
        }
        rounds.push_back(std::move(rj));
    }
    j["rounds"] = std::move(rounds);
    return j;
}

ArbitrationTrace trace_from_json(const Json& j) {
    try {
        ArbitrationTrace t;
        t.eta = j.at("eta").get<double>();
        t.policy = policy_from_string(j.at("policy").get<std::string>());
        t.converged = j.at("converged").get<bool>();
        for (const auto& rj : j.at("rounds")) {
            RoundRecord r;
            r.round = rj.at("round").get<int>();
            for (const auto& p : rj.at("mined")) r.mined.push_back(pair_from_json(p));
            for (const auto& p : rj.at("selected")) r.selected.push_back(pair_from_json(p));
            for (const auto& dj : rj.at("decisions")) {
                PairDecision d;
                d.pair = pair_from_json(dj.at("pair"));
                for (const auto& c : dj.at("context")) d.context.push_back(node_id_from_string(c.get<std::string>()));
                const auto& v = dj.at("verdict");
                d.verdict = ArbitrationVerdict{node_id_from_string(v.at("winner").get<std::string>()),
                                               node_id_from_string(v.at("loser").get<std::string>()),
                                               v.at("gate_w").get<int>(), v.at("confidence").get<double>()};
                for (const auto& u : dj.at("deltas")) {
                    d.updates.push_back(LogitUpdate{node_id_from_string(u.at("node").get<std::string>()),
                                                    u.at("old_logit").get<double>(), u.at("new_logit").get<double>()});
                }
                r.decisions.push_back(std::move(d));
            }
            t.rounds.push_back(std::move(r));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed trace: ") + e.what());
    }
}

}  // namespace arbgraph
