#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arbgraph/backend.hpp"
#include "arbgraph/model.hpp"

namespace arbgraph::cli {

enum ExitCode : int {
    kOk = 0,
    kDataError = 1,
    kConfigError = 2,
    kBackendError = 3,
    kIoError = 4,
    kBudgetExhausted = 10,  // arbitrate: rounds ran out with conflicts still active
};

struct ConfigOverrides {
    std::optional<double> tau_q;
    std::optional<double> tau_sim;
    std::optional<double> tau_conf;
    std::optional<double> tau_accept;
    std::optional<double> tau_gate;
    std::optional<double> tau_merge;
    std::optional<double> eta;
    std::optional<int> budget_k;
    std::optional<int> rounds;
    std::optional<int> max_support_edges;
    std::optional<int> per_pair_cap;
    std::optional<std::string> policy;
    std::optional<std::string> support_pruning;
    std::optional<std::uint64_t> seed;
};

/// defaults < file < flags, validated once at the end.
PipelineConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& flags,
                           PipelineConfig defaults = {});

/// Files are taken as given; directories contribute their regular files in
/// name order. A .json file holds {"id", "text"} or an array of those; any
/// other file is one document whose id is the file stem.
std::vector<Document> load_documents(const std::vector<std::filesystem::path>& inputs);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arbgraph::cli
