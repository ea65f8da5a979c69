#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "lsp/error.hpp"
#include "lsp/stats.hpp"

namespace lsp::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double f_cdf(double x, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw InvalidArgument("F distribution needs positive degrees of freedom");
    if (std::isnan(x)) throw InvalidArgument("F CDF of NaN");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::ibeta(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2));
}

double f_sf(double x, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw InvalidArgument("F distribution needs positive degrees of freedom");
    if (std::isnan(x)) throw InvalidArgument("F CDF of NaN");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::ibetac(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2));
}

RankResult friedman_ranks(const Matrix<double>& scores, bool higher_is_better) {
    const std::size_t n = scores.rows(), k = scores.cols();
    if (n == 0 || k == 0) throw InvalidArgument("rank matrix is empty");
    RankResult out{Matrix<double>(n, k), std::vector<double>(k, 0.0)};
    std::vector<std::size_t> order(k);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = scores.row(r);
        for (double v : row)
            if (!std::isfinite(v)) throw InvalidArgument("scores must be finite");
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return higher_is_better ? row[a] > row[b] : row[a] < row[b];
        });
        for (std::size_t i = 0; i < k;) {
            std::size_t j = i + 1;
            while (j < k && row[order[j]] == row[order[i]]) ++j;
            const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (std::size_t t = i; t < j; ++t) out.ranks(r, order[t]) = rank;
            i = j;
        }
        for (std::size_t c = 0; c < k; ++c) out.mean_ranks[c] += out.ranks(r, c);
    }
    for (auto& m : out.mean_ranks) m /= static_cast<double>(n);
    return out;
}

ImanDavenport iman_davenport(std::span<const double> mean_ranks, std::size_t dataset_count) {
    const std::size_t k = mean_ranks.size();
    if (dataset_count < 2 || k < 2) throw InvalidArgument("Iman-Davenport needs at least 2 datasets and 2 methods");
    const double N = static_cast<double>(dataset_count), K = static_cast<double>(k);
    double sum_sq = 0.0;
    for (double r : mean_ranks) sum_sq += r * r;
    ImanDavenport out;
    out.chi2 = std::max(0.0, 12.0 * N / (K * (K + 1.0)) * (sum_sq - K * (K + 1.0) * (K + 1.0) / 4.0));
    out.df1 = K - 1.0;
    out.df2 = (K - 1.0) * (N - 1.0);
    const double denom = N * (K - 1.0) - out.chi2;
    if (denom <= 1e-9 * N * K) {
        out.degenerate = true;
        out.f = std::numeric_limits<double>::infinity();
        out.p = 0.0;
        return out;
    }
    out.f = (N - 1.0) * out.chi2 / denom;
    out.p = f_sf(out.f, out.df1, out.df2);
    return out;
}

std::vector<double> rom_thresholds(std::size_t m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    std::vector<double> a(m + 1, 0.0);  // 1-based
    if (m >= 1) a[1] = alpha;
    if (m >= 2) a[2] = alpha / 2.0;
    for (std::size_t k = 3; k <= m; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i < k; ++i) s += std::pow(alpha, static_cast<double>(i));
        double binom = static_cast<double>(k);  // C(k, 1)
        for (std::size_t i = 1; i + 1 < k; ++i) {
            s -= binom * std::pow(a[i + 1], static_cast<double>(k - i));
            binom = binom * static_cast<double>(k - i) / static_cast<double>(i + 1);
        }
        a[k] = s / static_cast<double>(k);
    }
    a.erase(a.begin());
    return a;
}

std::vector<Comparison> rom_posthoc(std::span<const double> mean_ranks, std::size_t dataset_count,
                                    std::size_t control, double alpha) {
    const std::size_t k = mean_ranks.size();
    if (control >= k) throw InvalidArgument("control index out of range");
    if (dataset_count == 0) throw InvalidArgument("post-hoc test needs at least one dataset");
    const double K = static_cast<double>(k);
    const double se = std::sqrt(K * (K + 1.0) / (6.0 * static_cast<double>(dataset_count)));

    std::vector<Comparison> out;
    for (std::size_t i = 0; i < k; ++i) {
        if (i == control) continue;
        Comparison c;
        c.method = i;
        c.z = (mean_ranks[control] - mean_ranks[i]) / se;
        c.p = 0.5 * std::erfc(c.z / std::sqrt(2.0));
        out.push_back(c);
    }

    const auto thresholds = rom_thresholds(out.size(), alpha);
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out[a].p > out[b].p; });
    bool rejecting = false;
    for (std::size_t step = 0; step < order.size(); ++step) {
        auto& c = out[order[step]];
        c.threshold = thresholds[step];
        if (!rejecting && c.p <= c.threshold) rejecting = true;
        c.significant = rejecting;
    }
    return out;
}

}  // namespace lsp::stats
