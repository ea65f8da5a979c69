#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "lsp/community.hpp"

namespace lsp::community {
namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// One level of the search: nodes are vertices (first level) or modules of
// the previous level. Flow and exit are integer weight sums; dividing by the
// total flow 2W happens only inside plogp.
struct Level {
    std::vector<std::int64_t> flow;
    std::vector<std::int64_t> exit;
    std::vector<std::vector<LabelGraph::Neighbor>> links;
};

class LocalMover {
public:
    LocalMover(const Level& level, double total_flow)
        : level_(level), total_(total_flow), module_(level.flow.size()), exit_(level.exit), flow_(level.flow) {
        std::iota(module_.begin(), module_.end(), 0u);
        exit_total_ = std::accumulate(exit_.begin(), exit_.end(), std::int64_t{0});
        weight_to_.assign(module_.size(), 0);
    }

    // Sweeps in random order until no single move shortens the code.
    // Returns true if any node moved.
    bool optimize(std::mt19937_64& rng) {
        std::vector<std::uint32_t> order(module_.size());
        std::iota(order.begin(), order.end(), 0u);
        bool moved_any = false;
        for (int sweep = 0; sweep < 1000; ++sweep) {
            std::shuffle(order.begin(), order.end(), rng);
            bool moved = false;
            for (auto v : order) moved |= try_move(v);
            if (!moved) break;
            moved_any = true;
        }
        return moved_any;
    }

    const std::vector<std::uint32_t>& modules() const { return module_; }

private:
    double term(std::int64_t x) const { return plogp(static_cast<double>(x) / total_); }

    bool try_move(std::uint32_t v) {
        const auto from = module_[v];
        touched_.clear();
        for (const auto& nb : level_.links[v]) {
            const auto m = module_[nb.vertex];
            if (weight_to_[m] == 0) touched_.push_back(m);
            weight_to_[m] += nb.weight;
        }
        const std::int64_t w_from = weight_to_[from];
        const std::int64_t e_v = level_.exit[v];
        const std::int64_t f_v = level_.flow[v];
        const std::int64_t exit_from_new = exit_[from] - e_v + 2 * w_from;
        const std::int64_t flow_from_new = flow_[from] - f_v;

        std::sort(touched_.begin(), touched_.end());
        double best_delta = -1e-10;
        std::uint32_t best = from;
        for (auto to : touched_) {
            if (to == from) continue;
            const std::int64_t exit_to_new = exit_[to] + e_v - 2 * weight_to_[to];
            const std::int64_t flow_to_new = flow_[to] + f_v;
            const std::int64_t total_new = exit_total_ - exit_[from] - exit_[to] + exit_from_new + exit_to_new;
            const double delta = term(total_new) - term(exit_total_) -
                                 2.0 * (term(exit_from_new) + term(exit_to_new) - term(exit_[from]) - term(exit_[to])) +
                                 term(exit_from_new + flow_from_new) + term(exit_to_new + flow_to_new) -
                                 term(exit_[from] + flow_[from]) - term(exit_[to] + flow_[to]);
            if (delta < best_delta) {
                best_delta = delta;
                best = to;
            }
        }
        if (best != from) {
            const std::int64_t exit_to_new = exit_[best] + e_v - 2 * weight_to_[best];
            exit_total_ += exit_from_new + exit_to_new - exit_[from] - exit_[best];
            exit_[from] = exit_from_new;
            flow_[from] = flow_from_new;
            exit_[best] = exit_to_new;
            flow_[best] += f_v;
            module_[v] = best;
        }
        for (auto m : touched_) weight_to_[m] = 0;
        return best != from;
    }

    const Level& level_;
    double total_;
    std::vector<std::uint32_t> module_;
    std::vector<std::int64_t> exit_;
    std::vector<std::int64_t> flow_;
    std::int64_t exit_total_ = 0;
    std::vector<std::int64_t> weight_to_;
    std::vector<std::uint32_t> touched_;
};

// Collapses modules into nodes; returns the dense module index per node.
Level aggregate(const Level& level, const std::vector<std::uint32_t>& module, std::vector<std::uint32_t>& dense) {
    std::map<std::uint32_t, std::uint32_t> index;
    for (auto m : module) index.emplace(m, 0);
    std::uint32_t next = 0;
    for (auto& [m, i] : index) i = next++;
    dense.resize(module.size());
    for (std::size_t v = 0; v < module.size(); ++v) dense[v] = index[module[v]];

    Level out;
    out.flow.assign(next, 0);
    out.exit.assign(next, 0);
    std::vector<std::map<std::uint32_t, std::int64_t>> links(next);
    for (std::size_t v = 0; v < module.size(); ++v) {
        out.flow[dense[v]] += level.flow[v];
        for (const auto& nb : level.links[v]) {
            const auto a = dense[v], b = dense[nb.vertex];
            if (a == b) continue;
            links[a][b] += nb.weight;
            out.exit[a] += nb.weight;
        }
    }
    out.links.resize(next);
    for (std::uint32_t a = 0; a < next; ++a)
        for (const auto& [b, w] : links[a]) out.links[a].push_back({b, w});
    return out;
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

CommunityPartition infomap(const LabelGraph& input, const DetectorConfig& config) {
    config.validate();
    const LabelGraph graph = detail::effective_graph(input, config);
    const std::size_t n = graph.vertex_count();
    if (graph.edge_count() == 0) return CommunityPartition::singletons(n);
    const double total_flow = 2.0 * static_cast<double>(graph.total_weight());

    Level base;
    base.flow.resize(n);
    base.exit.resize(n);
    base.links.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        base.flow[v] = base.exit[v] = graph.strength(v);
        base.links[v].assign(graph.neighbors(v).begin(), graph.neighbors(v).end());
    }

    // Baseline candidate: one module per connected component.
    CommunityPartition best = CommunityPartition::from_membership(detail::components(graph));
    double best_length = map_equation(graph, best);

    for (int trial = 0; trial < config.infomap_trials; ++trial) {
        std::mt19937_64 rng(mix_seed(config.rng_seed ^ mix_seed(static_cast<std::uint64_t>(trial))));
        std::vector<std::uint32_t> owner(n);
        std::iota(owner.begin(), owner.end(), 0u);
        Level level = base;
        for (;;) {
            LocalMover mover(level, total_flow);
            if (!mover.optimize(rng)) break;
            std::vector<std::uint32_t> dense;
            Level next = aggregate(level, mover.modules(), dense);
            for (auto& o : owner) o = dense[o];
            if (next.flow.size() == level.flow.size()) break;
            level = std::move(next);
        }
        auto candidate = CommunityPartition::from_membership(owner);
        const double length = map_equation(graph, candidate);
        if (length < best_length) {
            best_length = length;
            best = std::move(candidate);
        }
    }
    return best;
}

}  // namespace lsp::community
