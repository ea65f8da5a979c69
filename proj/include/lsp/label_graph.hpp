#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "lsp/matrix.hpp"

namespace lsp {

/// Undirected label co-occurrence graph. Vertices are label indices; an edge
/// joins two labels assigned together to at least one training instance.
class LabelGraph {
public:
    struct Edge {
        std::uint32_t u;  // u < v
        std::uint32_t v;
        std::int64_t weight;

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    struct Neighbor {
        std::uint32_t vertex;
        std::int64_t weight;
    };

    LabelGraph() = default;

    /// Builds from an explicit edge list (used for synthetic graphs in tests
    /// and tools). Duplicate pairs and self-loops are rejected.
    LabelGraph(std::size_t vertex_count, std::vector<Edge> edges, bool weighted);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool weighted() const noexcept { return weighted_; }

    /// Edges sorted by (u, v).
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const Neighbor> neighbors(std::size_t v) const noexcept {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::int64_t strength(std::size_t v) const noexcept;
    /// Sum of edge weights (W).
    std::int64_t total_weight() const noexcept { return total_weight_; }

    /// Same edge set with every weight set to 1.
    LabelGraph unweighted() const;
    /// Every weight multiplied by `factor` (> 0).
    LabelGraph scaled(std::int64_t factor) const;

    /// `u v weight` lines, one per edge.
    void write_edge_list(std::ostream& out) const;

    friend bool operator==(const LabelGraph& a, const LabelGraph& b) noexcept {
        return a.vertex_count_ == b.vertex_count_ && a.weighted_ == b.weighted_ && a.edges_ == b.edges_;
    }

private:
    std::size_t vertex_count_ = 0;
    bool weighted_ = false;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
    std::int64_t total_weight_ = 0;
};

/// Edge {i,j} iff some row has both labels; weight = number of such rows
/// (weighted) or 1 (unweighted).
LabelGraph build_cooccurrence_graph(const LabelMatrix& labels, bool weighted);

}  // namespace lsp
