#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "lsp/community.hpp"
#include "lsp/simd.hpp"

namespace lsp::community {
namespace {

// Every vertex carries a loop of weight s_v / deg_v, so the walk matrix is
//   P_vv = 1 / (deg_v + 1),  P_vu = w_vu * deg_v / (s_v * (deg_v + 1)).
// Distances weight coordinate k by 1/d(k) with d(k) = s_k (deg_k + 1) / deg_k,
// multiplied here by the total strength so every ratio is a quotient of
// integers that scale together.
struct WalkModel {
    std::vector<std::vector<double>> rows;  // P^t for each vertex
    std::vector<double> inv_degree;         // proportional to 1 / d(k)
};

WalkModel random_walks(const LabelGraph& graph, int steps) {
    const std::size_t n = graph.vertex_count();
    std::vector<std::int64_t> strength(n);
    std::int64_t total = 0;
    for (std::size_t v = 0; v < n; ++v) total += strength[v] = graph.strength(v);

    WalkModel model;
    model.inv_degree.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        const auto deg = static_cast<std::int64_t>(graph.degree(v));
        if (deg == 0) continue;
        model.inv_degree[v] = static_cast<double>(static_cast<__int128>(deg) * total) /
                              static_cast<double>(static_cast<__int128>(strength[v]) * (deg + 1));
    }

    model.rows.resize(n);
    std::vector<double> next(n);
    for (std::size_t s = 0; s < n; ++s) {
        auto& cur = model.rows[s];
        cur.assign(n, 0.0);
        if (graph.degree(s) == 0) continue;
        cur[s] = 1.0;
        for (int t = 0; t < steps; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t v = 0; v < n; ++v) {
                if (cur[v] == 0.0) continue;
                const auto deg = static_cast<std::int64_t>(graph.degree(v));
                next[v] += cur[v] / static_cast<double>(deg + 1);
                const double denom = static_cast<double>(strength[v]) * static_cast<double>(deg + 1);
                for (const auto& nb : graph.neighbors(v))
                    next[nb.vertex] += cur[v] * (static_cast<double>(nb.weight * deg) / denom);
            }
            std::swap(cur, next);
        }
    }
    return model;
}

struct Cluster {
    std::size_t size = 1;
    std::vector<double> walk;
    std::int64_t strength = 0;
    std::map<std::uint32_t, std::int64_t> links;  // neighbour cluster -> edge weight between
};

}  // namespace

CommunityPartition walktrap(const LabelGraph& input, const DetectorConfig& config) {
    config.validate();
    const LabelGraph graph = detail::effective_graph(input, config);
    const std::size_t n = graph.vertex_count();
    if (graph.edge_count() == 0) return CommunityPartition::singletons(n);

    auto model = random_walks(graph, config.walktrap_steps);
    const __int128 four_w = 4 * static_cast<__int128>(graph.total_weight());

    std::vector<Cluster> clusters(n);
    __int128 q_scaled = 0;  // Q * 4W^2, exact
    for (std::uint32_t v = 0; v < n; ++v) {
        auto& c = clusters[v];
        c.walk = std::move(model.rows[v]);
        c.strength = graph.strength(v);
        for (const auto& nb : graph.neighbors(v)) c.links[nb.vertex] = nb.weight;
        q_scaled -= static_cast<__int128>(c.strength) * c.strength;
    }

    // delta sigma up to the constant 1/n
    auto delta_sigma = [&](std::uint32_t a, std::uint32_t b) {
        const auto& ca = clusters[a];
        const auto& cb = clusters[b];
        const double sizes = static_cast<double>(ca.size * cb.size) / static_cast<double>(ca.size + cb.size);
        return sizes * simd::weighted_sq_distance(ca.walk, cb.walk, model.inv_degree);
    };

    using Candidate = std::tuple<double, std::uint32_t, std::uint32_t>;
    std::set<Candidate> queue;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> pending;
    auto push = [&](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        const double d = delta_sigma(a, b);
        queue.emplace(d, a, b);
        pending[{a, b}] = d;
    };
    auto drop = [&](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        const auto it = pending.find({a, b});
        if (it == pending.end()) return;
        queue.erase({it->second, a, b});
        pending.erase(it);
    };
    for (const auto& e : graph.edges()) push(e.u, e.v);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> merges;
    __int128 best_q = q_scaled;
    std::size_t best_level = 0;
    while (!queue.empty()) {
        const auto [d, a, b] = *queue.begin();
        (void)d;
        auto& keep = clusters[a];
        auto& gone = clusters[b];
        const std::int64_t between = keep.links.at(b);
        q_scaled += four_w * between - 2 * static_cast<__int128>(keep.strength) * gone.strength;

        for (const auto& [c, w] : keep.links) drop(a, c);
        for (const auto& [c, w] : gone.links) drop(b, c);

        const double total = static_cast<double>(keep.size + gone.size);
        simd::scale(static_cast<double>(keep.size) / total, keep.walk);
        simd::axpy(static_cast<double>(gone.size) / total, gone.walk, keep.walk);
        keep.size += gone.size;
        keep.strength += gone.strength;
        keep.links.erase(b);
        for (const auto& [c, w] : gone.links) {
            if (c == a) continue;
            keep.links[c] += w;
            clusters[c].links.erase(b);
            clusters[c].links[a] += w;
        }
        gone.links.clear();
        gone.walk = {};
        for (const auto& [c, w] : keep.links) push(a, c);

        merges.emplace_back(a, b);
        if (q_scaled > best_q) {
            best_q = q_scaled;
            best_level = merges.size();
        }
    }

    std::vector<std::uint32_t> owner(n);
    std::iota(owner.begin(), owner.end(), 0u);
    for (std::size_t i = 0; i < best_level; ++i)
        for (auto& o : owner)
            if (o == merges[i].second) o = merges[i].first;
    return CommunityPartition::from_membership(owner);
}

}  // namespace lsp::community
