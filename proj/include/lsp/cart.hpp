#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lsp/matrix.hpp"

namespace lsp::cart {

struct CartParams {
    std::optional<int> max_depth;  // absent = unlimited
    int min_samples_to_split = 2;
    std::uint64_t rng_seed = 0;  // reserved; training is deterministic

    void validate() const;
};

/// 1 - sum_c (n_c / n)^2. Throws on an empty histogram.
double gini_impurity(std::span<const std::size_t> class_counts);

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

/// Best Gini split over `rows`, or nullopt when no threshold reduces impurity.
/// Thresholds sit at midpoints of adjacent distinct values; ties prefer the
/// smaller feature index, then the smaller threshold.
std::optional<Split> best_split(const FeatureMatrix& features, std::span<const int> classes,
                                std::span<const std::size_t> rows);

class DecisionTree {
public:
    struct Node {
        // Internal nodes: left/right >= 0. Leaves: left == right == -1.
        std::size_t feature = 0;
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::vector<std::size_t> class_counts;

        bool is_leaf() const noexcept { return left < 0; }
    };

    DecisionTree(std::vector<Node> nodes, std::size_t feature_count, std::size_t class_count);

    /// Descends with `x[feature] < threshold -> left`; argmax of the leaf
    /// histogram, ties to the smallest class id.
    int predict(std::span<const double> x) const;

    std::size_t feature_count() const noexcept { return feature_count_; }
    std::size_t class_count() const noexcept { return class_count_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t leaf_count() const noexcept;
    int depth() const noexcept;
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    /// Indented text dump for debugging; not a stable format.
    void dump(std::ostream& out) const;

    friend bool operator==(const DecisionTree& a, const DecisionTree& b) noexcept;

private:
    std::vector<Node> nodes_;
    std::size_t feature_count_;
    std::size_t class_count_;
};

DecisionTree train(const FeatureMatrix& features, std::span<const int> classes, const CartParams& params = {});

}  // namespace lsp::cart
