#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "lsp/community.hpp"
#include "lsp/error.hpp"

namespace lsp::community {
namespace {

class Votes {
public:
    explicit Votes(std::size_t n) : total_(n, 0) {}

    // Labels holding the maximal vote among v's neighbours, ascending.
    const std::vector<std::uint32_t>& dominant(const LabelGraph& graph, std::size_t v,
                                               const std::vector<std::uint32_t>& label) {
        touched_.clear();
        for (const auto& nb : graph.neighbors(v)) {
            const auto l = label[nb.vertex];
            if (total_[l] == 0) touched_.push_back(l);
            total_[l] += nb.weight;
        }
        std::int64_t best = 0;
        for (auto l : touched_) best = std::max(best, total_[l]);
        winners_.clear();
        for (auto l : touched_) {
            if (total_[l] == best) winners_.push_back(l);
            total_[l] = 0;
        }
        std::sort(winners_.begin(), winners_.end());
        return winners_;
    }

private:
    std::vector<std::int64_t> total_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint32_t> winners_;
};

}  // namespace

CommunityPartition label_propagation(const LabelGraph& input, const DetectorConfig& config) {
    config.validate();
    const LabelGraph graph = detail::effective_graph(input, config);
    const std::size_t n = graph.vertex_count();
    std::vector<std::uint32_t> label(n);
    std::iota(label.begin(), label.end(), 0u);

    std::vector<std::uint32_t> order;
    for (std::uint32_t v = 0; v < n; ++v)
        if (graph.degree(v) > 0) order.push_back(v);

    std::mt19937_64 rng(config.rng_seed);
    Votes votes(n);
    for (int sweep = 0; sweep < config.label_propagation_max_sweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto v : order) {
            const auto& winners = votes.dominant(graph, v, label);
            if (std::binary_search(winners.begin(), winners.end(), label[v])) continue;
            std::uniform_int_distribution<std::size_t> pick(0, winners.size() - 1);
            label[v] = winners[pick(rng)];
        }
        const bool settled = std::all_of(order.begin(), order.end(), [&](std::uint32_t v) {
            const auto& winners = votes.dominant(graph, v, label);
            return std::binary_search(winners.begin(), winners.end(), label[v]);
        });
        if (settled) return CommunityPartition::from_membership(label);
    }
    std::size_t unsettled = 0;
    for (auto v : order) {
        const auto& winners = votes.dominant(graph, v, label);
        if (!std::binary_search(winners.begin(), winners.end(), label[v])) ++unsettled;
    }
    throw ConvergenceError("label propagation did not settle within " +
                               std::to_string(config.label_propagation_max_sweeps) + " sweeps",
                           static_cast<double>(unsettled));
}

}  // namespace lsp::community
