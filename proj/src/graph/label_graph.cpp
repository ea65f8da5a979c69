#include "lsp/label_graph.hpp"

#include <algorithm>
#include <ostream>

#include "lsp/error.hpp"

namespace lsp {

LabelGraph::LabelGraph(std::size_t vertex_count, std::vector<Edge> edges, bool weighted)
    : vertex_count_(vertex_count), weighted_(weighted), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.u == e.v) throw InvalidArgument("self-loops are not allowed in a label graph");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.v >= vertex_count_) throw InvalidArgument("edge endpoint out of range");
        if (e.weight < 1) throw InvalidArgument("edge weights must be positive integers");
        if (!weighted_) e.weight = 1;
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw InvalidArgument("duplicate edge in label graph");

    std::vector<std::size_t> degree(vertex_count_, 0);
    for (const auto& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
        total_weight_ += e.weight;
    }
    offsets_.assign(vertex_count_ + 1, 0);
    for (std::size_t v = 0; v < vertex_count_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[fill[e.u]++] = {e.v, e.weight};
        adjacency_[fill[e.v]++] = {e.u, e.weight};
    }
    for (std::size_t v = 0; v < vertex_count_; ++v)
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                  [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
}

std::int64_t LabelGraph::strength(std::size_t v) const noexcept {
    std::int64_t s = 0;
    for (const auto& n : neighbors(v)) s += n.weight;
    return s;
}

LabelGraph LabelGraph::unweighted() const { return LabelGraph(vertex_count_, edges_, false); }

LabelGraph LabelGraph::scaled(std::int64_t factor) const {
    if (factor < 1) throw InvalidArgument("scale factor must be positive");
    auto edges = edges_;
    for (auto& e : edges) e.weight *= factor;
    return LabelGraph(vertex_count_, std::move(edges), true);
}

void LabelGraph::write_edge_list(std::ostream& out) const {
    for (const auto& e : edges_) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

LabelGraph build_cooccurrence_graph(const LabelMatrix& labels, bool weighted) {
    const std::size_t n = labels.cols();
    if (n == 0) throw InvalidArgument("cannot build a co-occurrence graph over zero labels");
    std::vector<std::int64_t> counts(n * n, 0);  // upper triangle used
    std::vector<std::uint32_t> active;
    for (std::size_t r = 0; r < labels.rows(); ++r) {
        active.clear();
        const auto row = labels.row(r);
        for (std::size_t j = 0; j < n; ++j)
            if (row[j]) active.push_back(static_cast<std::uint32_t>(j));
        for (std::size_t a = 0; a < active.size(); ++a)
            for (std::size_t b = a + 1; b < active.size(); ++b) ++counts[active[a] * n + active[b]];
    }
    std::vector<LabelGraph::Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (const auto c = counts[i * n + j]; c > 0) edges.push_back({i, j, c});
    return LabelGraph(n, std::move(edges), weighted);
}

}  // namespace lsp
