#include <map>
#include <numeric>

#include "lsp/community.hpp"

namespace lsp::community {

// Communities are named by their smallest vertex, so scanning pairs (a, b)
// with a < b in ascending order realizes the smallest-pair tie-break.
// Merge gains are kept as exact integers: dQ * 2W^2 = 2W * W_ab - S_a * S_b.
CommunityPartition fast_greedy(const LabelGraph& input, const DetectorConfig& config) {
    config.validate();
    const LabelGraph graph = detail::effective_graph(input, config);
    const std::size_t n = graph.vertex_count();
    const __int128 two_w = 2 * static_cast<__int128>(graph.total_weight());

    std::vector<std::map<std::uint32_t, std::int64_t>> links(n);
    std::vector<std::int64_t> strength(n, 0);
    std::vector<bool> alive(n, true);
    std::vector<std::uint32_t> owner(n);
    std::iota(owner.begin(), owner.end(), 0u);
    for (std::uint32_t v = 0; v < n; ++v) {
        strength[v] = graph.strength(v);
        for (const auto& nb : graph.neighbors(v)) links[v][nb.vertex] = nb.weight;
    }

    for (;;) {
        __int128 best_gain = 0;
        std::uint32_t best_a = 0, best_b = 0;
        bool found = false;
        for (std::uint32_t a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (auto it = links[a].upper_bound(a); it != links[a].end(); ++it) {
                const std::uint32_t b = it->first;
                const __int128 gain = two_w * it->second - static_cast<__int128>(strength[a]) * strength[b];
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = b;
                    found = true;
                }
            }
        }
        if (!found) break;

        // absorb best_b into best_a (best_a < best_b keeps the smallest-vertex name)
        alive[best_b] = false;
        strength[best_a] += strength[best_b];
        links[best_a].erase(best_b);
        for (const auto& [c, w] : links[best_b]) {
            if (c == best_a) continue;
            links[best_a][c] += w;
            links[c].erase(best_b);
            links[c][best_a] += w;
        }
        links[best_b].clear();
        for (auto& o : owner)
            if (o == best_b) o = best_a;
    }
    return CommunityPartition::from_membership(owner);
}

}  // namespace lsp::community
