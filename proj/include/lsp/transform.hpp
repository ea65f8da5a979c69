#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lsp/cart.hpp"
#include "lsp/dataset.hpp"
#include "lsp/partition.hpp"

namespace lsp::transform {

/// Sorted label indices.
using LabelSet = std::vector<std::uint32_t>;

enum class PartitionOrigin { random, community, apriori };

std::string_view origin_name(PartitionOrigin origin) noexcept;

/// Division of the label space into disjoint blocks; each block gets its own
/// Label Powerset model.
struct LabelPartition {
    Partition blocks;
    PartitionOrigin origin = PartitionOrigin::random;

    friend bool operator==(const LabelPartition&, const LabelPartition&) = default;
};

/// Bijection between the label combinations observed on a block and dense
/// class ids. Ids follow the lexicographic order of the 0/1 indicator tuples,
/// so the empty combination (when observed) is class 0.
class LpMapping {
public:
    LpMapping() = default;

    const LabelSet& block() const noexcept { return block_; }
    std::size_t class_count() const noexcept { return combinations_.size(); }

    /// Indicator tuple over `block()` for a class id.
    std::span<const std::uint8_t> combination(std::size_t class_id) const { return combinations_.at(class_id); }
    /// Labels (global indices) of a class id.
    LabelSet labels_of(std::size_t class_id) const;
    /// Class of a full label row restricted to the block; nullopt when the
    /// combination was never observed.
    std::optional<int> class_of(std::span<const std::uint8_t> label_row) const;

    friend bool operator==(const LpMapping&, const LpMapping&) = default;

private:
    friend LpMapping lp_fit_mapping(const LabelMatrix& labels, std::span<const std::uint32_t> block);

    LabelSet block_;
    std::vector<std::vector<std::uint8_t>> combinations_;  // sorted
};

LpMapping lp_fit_mapping(const LabelMatrix& labels, std::span<const std::uint32_t> block);

struct LpModel {
    LpMapping mapping;
    cart::DecisionTree tree;
};

LpModel lp_train(const Dataset& data, std::span<const std::uint32_t> block, const cart::CartParams& params);
LabelSet lp_predict(const LpModel& model, std::span<const double> x);

/// One binary tree per label.
using BrModel = std::vector<cart::DecisionTree>;

BrModel br_train(const Dataset& data, const cart::CartParams& params);
LabelSet br_predict(const BrModel& model, std::span<const double> x);

struct EnsembleModel {
    LabelPartition partition;
    std::vector<LpModel> members;  // one per block, in block order
};

EnsembleModel ensemble_train(const Dataset& data, const LabelPartition& partition, const cart::CartParams& params);
LabelSet ensemble_predict(const EnsembleModel& model, std::span<const double> x);

/// Predicts every row of `features` into a 0/1 matrix with `label_count` columns.
LabelMatrix predict_matrix(const std::function<LabelSet(std::span<const double>)>& predict,
                           const FeatureMatrix& features, std::size_t label_count);

using BigCount = boost::multiprecision::cpp_int;

/// Number of ways to split n labels into floor(n/k) blocks of size k plus one
/// block of the remaining n mod k labels.
BigCount count_partitions(std::size_t n, std::size_t k);

/// Every partition of that shape, in canonical order. Throws
/// InvalidArgument when the count exceeds `cap`.
std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t k, std::size_t cap = 1'000'000);

/// Shuffles 0..n-1 and chunks it into blocks of size k (last block shorter).
Partition draw_partition(std::size_t n, std::size_t k, std::mt19937_64& rng);

/// `count` distinct partitions drawn uniformly, or the whole universe in
/// canonical order when it has at most `count` members.
std::vector<Partition> sample_partitions(std::size_t n, std::size_t k, std::size_t count, std::uint64_t rng_seed);

inline constexpr int default_k_percentages[] = {10, 20, 30, 40, 50, 60, 70, 80, 90};

/// Block sizes round(p * n / 100) (half up) clamped to [1, n-1], ascending
/// and without duplicates.
std::vector<std::size_t> k_grid(std::size_t n, std::span<const int> percentages = default_k_percentages);

}  // namespace lsp::transform
