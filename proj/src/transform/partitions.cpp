#include <algorithm>
#include <numeric>
#include <set>

#include "lsp/error.hpp"
#include "lsp/transform.hpp"

namespace lsp::transform {
namespace {

BigCount binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigCount c = 1;
    for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

void check_shape(std::size_t n, std::size_t k) {
    if (k < 1 || k > n)
        throw InvalidArgument("block size " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

class Enumerator {
public:
    Enumerator(std::size_t n, std::size_t k) : n_(n), k_(k), full_left_(n / k), rem_(n % k), used_(n, false) {}

    std::vector<Partition> run() {
        recurse();
        std::sort(out_.begin(), out_.end());
        return std::move(out_);
    }

private:
    void recurse() {
        const auto first = std::find(used_.begin(), used_.end(), false);
        if (first == used_.end()) {
            out_.emplace_back(blocks_, n_);
            return;
        }
        const auto start = static_cast<std::uint32_t>(first - used_.begin());
        if (full_left_ > 0) {
            --full_left_;
            open_block(start, k_);
            ++full_left_;
        }
        if (rem_ > 0) {
            const auto r = rem_;
            rem_ = 0;
            open_block(start, r);
            rem_ = r;
        }
    }

    void open_block(std::uint32_t start, std::size_t size) {
        used_[start] = true;
        blocks_.push_back({start});
        extend(start + 1, size - 1);
        blocks_.pop_back();
        used_[start] = false;
    }

    // Chooses `need` more members greater than or equal to `from`.
    void extend(std::uint32_t from, std::size_t need) {
        if (need == 0) {
            recurse();
            return;
        }
        for (std::uint32_t v = from; v < n_; ++v) {
            if (used_[v]) continue;
            used_[v] = true;
            blocks_.back().push_back(v);
            extend(v + 1, need - 1);
            blocks_.back().pop_back();
            used_[v] = false;
        }
    }

    std::size_t n_;
    std::size_t k_;
    std::size_t full_left_;
    std::size_t rem_;
    std::vector<bool> used_;
    std::vector<Partition::Block> blocks_;
    std::vector<Partition> out_;
};

}  // namespace

BigCount count_partitions(std::size_t n, std::size_t k) {
    check_shape(n, k);
    const std::size_t full = n / k;
    const std::size_t rem = n % k;
    // Pick the remainder block, then repeatedly give the smallest free label
    // its k-1 companions.
    BigCount c = binomial(n, rem);
    for (std::size_t i = 0; i < full; ++i) c *= binomial(n - rem - i * k - 1, k - 1);
    return c;
}

std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t k, std::size_t cap) {
    const BigCount total = count_partitions(n, k);
    if (total > cap)
        throw InvalidArgument(total.str() + " partitions of " + std::to_string(n) + " labels into blocks of " +
                              std::to_string(k) + " exceed the enumeration cap of " + std::to_string(cap) +
                              "; sample instead");
    return Enumerator(n, k).run();
}

Partition draw_partition(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    check_shape(n, k);
    std::vector<std::uint32_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0u);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<Partition::Block> blocks;
    for (std::size_t i = 0; i < n; i += k)
        blocks.emplace_back(labels.begin() + i, labels.begin() + std::min(n, i + k));
    return Partition(std::move(blocks), n);
}

std::vector<Partition> sample_partitions(std::size_t n, std::size_t k, std::size_t count, std::uint64_t rng_seed) {
    if (count_partitions(n, k) <= count) return enumerate_partitions(n, k, count);
    std::mt19937_64 rng(rng_seed);
    std::set<Partition> seen;
    std::vector<Partition> out;
    out.reserve(count);
    while (out.size() < count) {
        Partition p = draw_partition(n, k, rng);
        if (seen.insert(p).second) out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::size_t> k_grid(std::size_t n, std::span<const int> percentages) {
    if (n < 2) throw InvalidArgument("k grid needs at least two labels");
    std::vector<std::size_t> ks;
    for (int p : percentages) {
        if (p <= 0 || p >= 100) throw InvalidArgument("k percentage must lie in (0, 100)");
        // floor(p * n / 100 + 1/2) in exact integer arithmetic
        std::size_t k = (static_cast<std::size_t>(p) * n * 2 + 100) / 200;
        ks.push_back(std::clamp<std::size_t>(k, 1, n - 1));
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

}  // namespace lsp::transform
