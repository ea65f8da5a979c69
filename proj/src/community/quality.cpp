#include <cmath>
#include <string>

#include "lsp/community.hpp"
#include "lsp/error.hpp"

namespace lsp::community {

std::string_view algorithm_name(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::fastgreedy: return "fastgreedy";
        case Algorithm::leading_eigenvector: return "leading_eigenvector";
        case Algorithm::label_propagation: return "label_propagation";
        case Algorithm::walktrap: return "walktrap";
        case Algorithm::infomap: return "infomap";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (auto a : {Algorithm::fastgreedy, Algorithm::leading_eigenvector, Algorithm::label_propagation,
                   Algorithm::walktrap, Algorithm::infomap})
        if (algorithm_name(a) == name) return a;
    return std::nullopt;
}

void DetectorConfig::validate() const {
    if (walktrap_steps < 1) throw InvalidArgument("walktrap_steps must be at least 1");
    if (infomap_trials < 1) throw InvalidArgument("infomap_trials must be at least 1");
    if (!(eigen_tolerance > 0.0)) throw InvalidArgument("eigen_tolerance must be positive");
    if (eigen_max_iterations < 1) throw InvalidArgument("eigen_max_iterations must be at least 1");
    if (label_propagation_max_sweeps < 1) throw InvalidArgument("label_propagation_max_sweeps must be at least 1");
}

namespace {

void check_cover(const LabelGraph& graph, const CommunityPartition& partition) {
    if (partition.element_count() != graph.vertex_count())
        throw InvalidArgument("partition covers " + std::to_string(partition.element_count()) +
                              " elements but the graph has " + std::to_string(graph.vertex_count()) + " vertices");
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

double modularity(const LabelGraph& graph, const CommunityPartition& partition) {
    check_cover(graph, partition);
    const std::int64_t total = graph.total_weight();
    if (total == 0) return 0.0;
    const auto member = partition.membership();
    std::vector<std::int64_t> inside(partition.block_count(), 0), strength(partition.block_count(), 0);
    for (const auto& e : graph.edges()) {
        strength[member[e.u]] += e.weight;
        strength[member[e.v]] += e.weight;
        if (member[e.u] == member[e.v]) inside[member[e.u]] += e.weight;
    }
    // Q * 4W^2 = sum_c (4W * W_in(c) - S(c)^2), exact in integers
    __int128 scaled = 0;
    for (std::size_t c = 0; c < inside.size(); ++c)
        scaled += static_cast<__int128>(4) * total * inside[c] - static_cast<__int128>(strength[c]) * strength[c];
    const double denom = 4.0 * static_cast<double>(total) * static_cast<double>(total);
    return static_cast<double>(scaled) / denom;
}

double map_equation(const LabelGraph& graph, const CommunityPartition& partition) {
    check_cover(graph, partition);
    if (graph.edge_count() == 0) throw InvalidArgument("the map equation is undefined on a graph without edges");
    const double flow_total = 2.0 * static_cast<double>(graph.total_weight());
    const auto member = partition.membership();
    std::vector<std::int64_t> exit(partition.block_count(), 0), flow(partition.block_count(), 0);
    double node_term = 0.0;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        const auto s = graph.strength(v);
        flow[member[v]] += s;
        node_term += plogp(static_cast<double>(s) / flow_total);
    }
    std::int64_t exit_total = 0;
    for (const auto& e : graph.edges()) {
        if (member[e.u] != member[e.v]) {
            exit[member[e.u]] += e.weight;
            exit[member[e.v]] += e.weight;
            exit_total += 2 * e.weight;
        }
    }
    double exit_term = 0.0, module_term = 0.0;
    for (std::size_t m = 0; m < exit.size(); ++m) {
        exit_term += plogp(static_cast<double>(exit[m]) / flow_total);
        module_term += plogp(static_cast<double>(exit[m] + flow[m]) / flow_total);
    }
    return plogp(static_cast<double>(exit_total) / flow_total) - 2.0 * exit_term - node_term + module_term;
}

namespace detail {

LabelGraph effective_graph(const LabelGraph& graph, const DetectorConfig& config) {
    return config.use_weights ? graph : graph.unweighted();
}

std::vector<std::uint32_t> components(const LabelGraph& graph) {
    const std::size_t n = graph.vertex_count();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::vector<std::uint32_t> stack;
    std::uint32_t next = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (const auto& nb : graph.neighbors(v))
                if (comp[nb.vertex] == UINT32_MAX) {
                    comp[nb.vertex] = next;
                    stack.push_back(nb.vertex);
                }
        }
        ++next;
    }
    return comp;
}

}  // namespace detail

CommunityPartition detect(const LabelGraph& graph, const DetectorConfig& config) {
    switch (config.algorithm) {
        case Algorithm::fastgreedy: return fast_greedy(graph, config);
        case Algorithm::leading_eigenvector: return leading_eigenvector(graph, config);
        case Algorithm::label_propagation: return label_propagation(graph, config);
        case Algorithm::walktrap: return walktrap(graph, config);
        case Algorithm::infomap: return infomap(graph, config);
    }
    throw InvalidArgument("unknown community detection algorithm");
}

}  // namespace lsp::community
