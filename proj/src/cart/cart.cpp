#include "lsp/cart.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "lsp/error.hpp"

namespace lsp::cart {

void CartParams::validate() const {
    if (max_depth && *max_depth < 1) throw InvalidArgument("max_depth must be at least 1");
    if (min_samples_to_split < 2) throw InvalidArgument("min_samples_to_split must be at least 2");
}

double gini_impurity(std::span<const std::size_t> class_counts) {
    const std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
    if (total == 0) throw InvalidArgument("gini impurity of an empty histogram");
    const double n = static_cast<double>(total);
    double sum_sq = 0.0;
    for (auto c : class_counts) {
        const double p = static_cast<double>(c) / n;
        sum_sq += p * p;
    }
    return std::max(0.0, 1.0 - sum_sq);
}

namespace {

// sum_c n_c^2 / n, i.e. n * (1 - gini). Larger is purer.
double purity_score(const std::vector<std::size_t>& counts, std::size_t n) {
    double s = 0.0;
    for (auto c : counts) s += static_cast<double>(c) * static_cast<double>(c);
    return s / static_cast<double>(n);
}

std::size_t class_count_of(std::span<const int> classes) {
    int max_class = -1;
    for (int c : classes) {
        if (c < 0) throw InvalidArgument("class ids must be nonnegative");
        max_class = std::max(max_class, c);
    }
    return static_cast<std::size_t>(max_class + 1);
}

std::optional<Split> best_split_impl(const FeatureMatrix& features, std::span<const int> classes,
                                     std::span<const std::size_t> rows, std::size_t n_classes) {
    const std::size_t n = rows.size();
    if (n < 2) return std::nullopt;

    std::vector<std::size_t> parent(n_classes, 0);
    for (auto r : rows) ++parent[static_cast<std::size_t>(classes[r])];
    if (std::count_if(parent.begin(), parent.end(), [](std::size_t c) { return c > 0; }) < 2) return std::nullopt;

    const double parent_score = purity_score(parent, n);
    const double eps = 1e-12 * static_cast<double>(n);

    std::optional<Split> best;
    double best_score = parent_score + eps;  // must strictly improve on the parent

    std::vector<std::size_t> order(rows.begin(), rows.end());
    std::vector<std::size_t> left(n_classes), right(n_classes);
    for (std::size_t f = 0; f < features.cols(); ++f) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return features(a, f) < features(b, f); });
        if (features(order.front(), f) == features(order.back(), f)) continue;

        std::fill(left.begin(), left.end(), 0);
        right = parent;
        double sum_left = 0.0;  // sum n_c^2 on each side, updated incrementally
        double sum_right = 0.0;
        for (auto c : right) sum_right += static_cast<double>(c) * static_cast<double>(c);

        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto c = static_cast<std::size_t>(classes[order[i]]);
            sum_left += 2.0 * static_cast<double>(left[c]) + 1.0;
            sum_right -= 2.0 * static_cast<double>(right[c]) - 1.0;
            ++left[c];
            --right[c];
            const double lo = features(order[i], f);
            const double hi = features(order[i + 1], f);
            if (!(lo < hi)) continue;
            const std::size_t n_left = i + 1;
            const double score = sum_left / static_cast<double>(n_left) + sum_right / static_cast<double>(n - n_left);
            if (score > best_score + (best ? eps : 0.0)) {
                double threshold = lo + (hi - lo) / 2.0;
                if (!(threshold > lo)) threshold = hi;
                best_score = score;
                best = Split{f, threshold, 0.0};
            }
        }
    }
    if (best) best->impurity_decrease = (best_score - parent_score) / static_cast<double>(n);
    return best;
}

class Builder {
public:
    Builder(const FeatureMatrix& features, std::span<const int> classes, const CartParams& params,
            std::size_t n_classes)
        : features_(features), classes_(classes), params_(params), n_classes_(n_classes) {}

    std::vector<DecisionTree::Node> build(std::vector<std::size_t> rows) {
        grow(rows, 0);
        return std::move(nodes_);
    }

private:
    std::int32_t grow(std::span<std::size_t> rows, int depth) {
        const auto index = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        std::vector<std::size_t> counts(n_classes_, 0);
        for (auto r : rows) ++counts[static_cast<std::size_t>(classes_[r])];

        const bool depth_reached = params_.max_depth && depth >= *params_.max_depth;
        const bool too_small = rows.size() < static_cast<std::size_t>(params_.min_samples_to_split);
        std::optional<Split> split;
        if (!depth_reached && !too_small) split = best_split_impl(features_, classes_, rows, n_classes_);
        if (!split) {
            nodes_[static_cast<std::size_t>(index)].class_counts = std::move(counts);
            return index;
        }

        const auto mid = std::stable_partition(rows.begin(), rows.end(), [&](std::size_t r) {
            return features_(r, split->feature) < split->threshold;
        });
        const auto n_left = static_cast<std::size_t>(mid - rows.begin());
        const auto left = grow(rows.subspan(0, n_left), depth + 1);
        const auto right = grow(rows.subspan(n_left), depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(index)];
        node.feature = split->feature;
        node.threshold = split->threshold;
        node.left = left;
        node.right = right;
        node.class_counts = std::move(counts);
        return index;
    }

    const FeatureMatrix& features_;
    std::span<const int> classes_;
    const CartParams& params_;
    std::size_t n_classes_;
    std::vector<DecisionTree::Node> nodes_;
};

}  // namespace

std::optional<Split> best_split(const FeatureMatrix& features, std::span<const int> classes,
                                std::span<const std::size_t> rows) {
    if (classes.size() != features.rows()) throw InvalidArgument("class vector length differs from row count");
    for (auto r : rows)
        if (r >= features.rows()) throw InvalidArgument("candidate row out of range");
    return best_split_impl(features, classes, rows, class_count_of(classes));
}

DecisionTree train(const FeatureMatrix& features, std::span<const int> classes, const CartParams& params) {
    params.validate();
    if (features.rows() == 0 || classes.empty()) throw InvalidArgument("cannot train a tree on an empty training set");
    if (classes.size() != features.rows()) throw InvalidArgument("class vector length differs from row count");
    const std::size_t n_classes = class_count_of(classes);
    std::vector<std::size_t> rows(features.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    auto nodes = Builder(features, classes, params, n_classes).build(std::move(rows));
    return DecisionTree(std::move(nodes), features.cols(), n_classes);
}

DecisionTree::DecisionTree(std::vector<Node> nodes, std::size_t feature_count, std::size_t class_count)
    : nodes_(std::move(nodes)), feature_count_(feature_count), class_count_(class_count) {
    if (nodes_.empty()) throw InvalidArgument("a tree needs at least one node");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.is_leaf()) {
            if (n.right >= 0) throw InvalidArgument("leaf with a right child");
            if (std::accumulate(n.class_counts.begin(), n.class_counts.end(), std::size_t{0}) == 0)
                throw InvalidArgument("leaf with an empty class histogram");
        } else {
            // children are always created after their parent, which rules out cycles
            const auto l = static_cast<std::size_t>(n.left), r = static_cast<std::size_t>(n.right);
            if (n.right < 0 || l <= i || r <= i || l >= nodes_.size() || r >= nodes_.size())
                throw InvalidArgument("internal node with invalid children");
            if (n.feature >= feature_count_) throw InvalidArgument("split feature out of range");
        }
    }
}

int DecisionTree::predict(std::span<const double> x) const {
    if (x.size() != feature_count_)
        throw InvalidArgument("feature vector has " + std::to_string(x.size()) + " values, tree expects " +
                              std::to_string(feature_count_));
    const Node* node = &nodes_.front();
    while (!node->is_leaf())
        node = &nodes_[static_cast<std::size_t>(x[node->feature] < node->threshold ? node->left : node->right)];
    const auto best = std::max_element(node->class_counts.begin(), node->class_counts.end());
    return static_cast<int>(best - node->class_counts.begin());
}

std::size_t DecisionTree::leaf_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

int DecisionTree::depth() const noexcept {
    std::vector<int> d(nodes_.size(), 0);
    int out = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        out = std::max(out, d[i]);
        if (!nodes_[i].is_leaf()) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return out;
}

void DecisionTree::dump(std::ostream& out) const {
    struct Frame {
        std::int32_t node;
        int depth;
    };
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
        if (n.is_leaf()) {
            out << "leaf [";
            for (std::size_t c = 0; c < n.class_counts.size(); ++c) out << (c ? "," : "") << n.class_counts[c];
            out << "]\n";
        } else {
            out << "x[" << n.feature << "] < " << n.threshold << '\n';
            stack.push_back({n.right, depth + 1});
            stack.push_back({n.left, depth + 1});
        }
    }
}

bool operator==(const DecisionTree& a, const DecisionTree& b) noexcept {
    if (a.feature_count_ != b.feature_count_ || a.class_count_ != b.class_count_ || a.nodes_.size() != b.nodes_.size())
        return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.left != y.left || x.right != y.right || x.class_counts != y.class_counts) return false;
        if (!x.is_leaf() && (x.feature != y.feature || x.threshold != y.threshold)) return false;
    }
    return true;
}

}  // namespace lsp::cart
