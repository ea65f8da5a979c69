#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lsp/label_graph.hpp"
#include "lsp/partition.hpp"

namespace lsp::community {

using CommunityPartition = Partition;

enum class Algorithm { fastgreedy, leading_eigenvector, label_propagation, walktrap, infomap };

std::string_view algorithm_name(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct DetectorConfig {
    Algorithm algorithm = Algorithm::fastgreedy;
    bool use_weights = true;
    std::uint64_t rng_seed = 0;
    int walktrap_steps = 4;
    int infomap_trials = 10;
    double eigen_tolerance = 1e-10;
    int eigen_max_iterations = 10000;  // accepted for config compatibility; the dense solver has its own cap
    int label_propagation_max_sweeps = 1000;

    void validate() const;
};

/// Newman modularity, weighted by the graph's stored weights:
/// Q = sum_c [ W_in(c)/W - (S(c)/2W)^2 ]. Zero for a graph without edges.
double modularity(const LabelGraph& graph, const CommunityPartition& partition);

/// Two-level map equation codelength in bits, with undirected flow
/// p_v = s_v / 2W. Vertices without edges carry no flow.
double map_equation(const LabelGraph& graph, const CommunityPartition& partition);

// Every detector places isolated vertices in singleton blocks and, when
// `config.use_weights` is false, treats every edge as weight 1.

/// Clauset-Newman-Moore agglomeration; stops when no merge raises Q.
CommunityPartition fast_greedy(const LabelGraph& graph, const DetectorConfig& config);

/// Newman's recursive spectral bisection on the generalized modularity
/// matrix. Throws ConvergenceError if the eigensolver fails to converge.
CommunityPartition leading_eigenvector(const LabelGraph& graph, const DetectorConfig& config);

/// Asynchronous label propagation in a seeded random order per sweep.
CommunityPartition label_propagation(const LabelGraph& graph, const DetectorConfig& config);

/// Pons-Latapy walktrap; dendrogram cut at maximum modularity.
CommunityPartition walktrap(const LabelGraph& graph, const DetectorConfig& config);

/// Two-level map-equation minimization (local moves + aggregation), best of
/// `infomap_trials` seeded restarts.
CommunityPartition infomap(const LabelGraph& graph, const DetectorConfig& config);

CommunityPartition detect(const LabelGraph& graph, const DetectorConfig& config);

namespace detail {
/// Graph the detector actually works on (unit weights when weights are off).
LabelGraph effective_graph(const LabelGraph& graph, const DetectorConfig& config);
/// Connected components over vertices with at least one edge; isolated
/// vertices get their own component.
std::vector<std::uint32_t> components(const LabelGraph& graph);
}  // namespace detail

}  // namespace lsp::community
