#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "lsp/community.hpp"
#include "lsp/error.hpp"
#include "lsp/simd.hpp"

namespace lsp::community {
namespace {

struct Eigenpair {
    double value;
    std::vector<double> vector;
};

// Most positive eigenpair of a dense symmetric matrix.
Eigenpair leading_eigenpair(const std::vector<double>& m, std::size_t n) {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> b(
        m.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    const auto last = static_cast<Eigen::Index>(n) - 1;
    if (solver.info() != Eigen::Success) {
        double residual = std::numeric_limits<double>::infinity();
        if (solver.info() == Eigen::NoConvergence)
            residual = (b * solver.eigenvectors().col(last) - solver.eigenvalues()[last] * solver.eigenvectors().col(last)).norm();
        throw ConvergenceError("leading eigenvector: symmetric eigensolver did not converge", residual);
    }
    Eigenpair out{solver.eigenvalues()[last], std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) out.vector[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), last);
    return out;
}

}  // namespace

CommunityPartition leading_eigenvector(const LabelGraph& input, const DetectorConfig& config) {
    config.validate();
    const LabelGraph graph = detail::effective_graph(input, config);
    const std::size_t n = graph.vertex_count();
    const double two_w = 2.0 * static_cast<double>(graph.total_weight());

    std::vector<std::uint32_t> membership(n);
    std::uint32_t next_block = 0;
    std::vector<std::uint32_t> connected;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (graph.degree(v) == 0)
            membership[v] = next_block++;
        else
            connected.push_back(v);
    }
    if (connected.empty()) return CommunityPartition::from_membership(membership);

    // Normalized quantities (divided by 2W) keep results identical under
    // uniform weight scaling.
    std::vector<double> k(n);
    for (std::size_t v = 0; v < n; ++v) k[v] = static_cast<double>(graph.strength(v)) / two_w;

    std::deque<std::vector<std::uint32_t>> work{connected};
    std::vector<std::int64_t> position(n, -1);
    while (!work.empty()) {
        auto group = std::move(work.front());
        work.pop_front();
        const std::size_t g = group.size();
        auto finalize = [&] {
            for (auto v : group) membership[v] = next_block;
            ++next_block;
        };
        if (g < 2) {
            finalize();
            continue;
        }
        for (std::size_t i = 0; i < g; ++i) position[group[i]] = static_cast<std::int64_t>(i);

        double k_group = 0.0;
        for (auto v : group) k_group += k[v];
        std::vector<double> b(g * g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j) b[i * g + j] = -k[group[i]] * k[group[j]];
        std::vector<double> a_row_sum(g, 0.0);
        for (std::size_t i = 0; i < g; ++i) {
            for (const auto& nb : graph.neighbors(group[i])) {
                const auto pj = position[nb.vertex];
                if (pj < 0) continue;
                const double a = static_cast<double>(nb.weight) / two_w;
                b[i * g + static_cast<std::size_t>(pj)] += a;
                a_row_sum[i] += a;
            }
        }
        // generalized modularity matrix: subtract row sums over the group
        for (std::size_t i = 0; i < g; ++i) b[i * g + i] -= a_row_sum[i] - k[group[i]] * k_group;
        for (auto v : group) position[v] = -1;

        double norm = 0.0;
        for (std::size_t i = 0; i < g; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < g; ++j) s += std::abs(b[i * g + j]);
            norm = std::max(norm, s);
        }
        if (norm == 0.0) {
            finalize();
            continue;
        }

        const auto pair = leading_eigenpair(b, g);
        if (!(pair.value > config.eigen_tolerance * norm)) {
            finalize();
            continue;
        }
        // orient so the largest-magnitude component is positive; ~0 counts as positive
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < g; ++i)
            if (std::abs(pair.vector[i]) > std::abs(pair.vector[pivot])) pivot = i;
        const double orient = pair.vector[pivot] < 0.0 ? -1.0 : 1.0;
        std::vector<double> sign(g);
        std::vector<std::uint32_t> plus, minus;
        for (std::size_t i = 0; i < g; ++i) {
            const double c = orient * pair.vector[i];
            sign[i] = c >= -1e-12 ? 1.0 : -1.0;
            (sign[i] > 0 ? plus : minus).push_back(group[i]);
        }
        if (minus.empty()) {
            finalize();
            continue;
        }
        // dQ = s^T B s / 2 in normalized units
        double gain = 0.0;
        for (std::size_t i = 0; i < g; ++i) gain += sign[i] * simd::dot(std::span<const double>(b.data() + i * g, g), sign);
        if (!(gain / 2.0 > 1e-12)) {
            finalize();
            continue;
        }
        work.push_back(std::move(plus));
        work.push_back(std::move(minus));
    }
    return CommunityPartition::from_membership(membership);
}

}  // namespace lsp::community
