#include <algorithm>

#include "lsp/error.hpp"
#include "lsp/transform.hpp"

namespace lsp::transform {

std::string_view origin_name(PartitionOrigin origin) noexcept {
    switch (origin) {
        case PartitionOrigin::random: return "random";
        case PartitionOrigin::community: return "community";
        case PartitionOrigin::apriori: return "apriori";
    }
    return "unknown";
}

LabelSet LpMapping::labels_of(std::size_t class_id) const {
    const auto& c = combinations_.at(class_id);
    LabelSet out;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) out.push_back(block_[i]);
    return out;
}

std::optional<int> LpMapping::class_of(std::span<const std::uint8_t> label_row) const {
    std::vector<std::uint8_t> key(block_.size());
    for (std::size_t i = 0; i < block_.size(); ++i) key[i] = label_row[block_[i]];
    auto it = std::lower_bound(combinations_.begin(), combinations_.end(), key);
    if (it == combinations_.end() || *it != key) return std::nullopt;
    return static_cast<int>(it - combinations_.begin());
}

LpMapping lp_fit_mapping(const LabelMatrix& labels, std::span<const std::uint32_t> block) {
    if (block.empty()) throw InvalidArgument("label block is empty");
    LpMapping m;
    m.block_.assign(block.begin(), block.end());
    std::sort(m.block_.begin(), m.block_.end());
    if (std::adjacent_find(m.block_.begin(), m.block_.end()) != m.block_.end())
        throw InvalidArgument("label block has a repeated label");
    if (m.block_.back() >= labels.cols()) throw InvalidArgument("label block index out of range");

    for (std::size_t r = 0; r < labels.rows(); ++r) {
        std::vector<std::uint8_t> key(m.block_.size());
        for (std::size_t i = 0; i < m.block_.size(); ++i) key[i] = labels(r, m.block_[i]);
        m.combinations_.push_back(std::move(key));
    }
    std::sort(m.combinations_.begin(), m.combinations_.end());
    m.combinations_.erase(std::unique(m.combinations_.begin(), m.combinations_.end()), m.combinations_.end());
    return m;
}

LpModel lp_train(const Dataset& data, std::span<const std::uint32_t> block, const cart::CartParams& params) {
    if (data.instance_count() == 0) throw InvalidArgument("cannot train on an empty dataset");
    LpMapping mapping = lp_fit_mapping(data.labels(), block);
    std::vector<int> classes(data.instance_count());
    for (std::size_t r = 0; r < classes.size(); ++r) classes[r] = *mapping.class_of(data.labels().row(r));
    cart::DecisionTree tree = cart::train(data.features(), classes, params);
    return LpModel{std::move(mapping), std::move(tree)};
}

LabelSet lp_predict(const LpModel& model, std::span<const double> x) {
    return model.mapping.labels_of(static_cast<std::size_t>(model.tree.predict(x)));
}

BrModel br_train(const Dataset& data, const cart::CartParams& params) {
    if (data.label_count() == 0) throw InvalidArgument("binary relevance needs at least one label");
    if (data.instance_count() == 0) throw InvalidArgument("cannot train on an empty dataset");
    BrModel model;
    model.reserve(data.label_count());
    std::vector<int> classes(data.instance_count());
    for (std::size_t j = 0; j < data.label_count(); ++j) {
        for (std::size_t r = 0; r < classes.size(); ++r) classes[r] = data.labels()(r, j);
        model.push_back(cart::train(data.features(), classes, params));
    }
    return model;
}

LabelSet br_predict(const BrModel& model, std::span<const double> x) {
    LabelSet out;
    for (std::uint32_t j = 0; j < model.size(); ++j)
        if (model[j].predict(x) == 1) out.push_back(j);
    return out;
}

EnsembleModel ensemble_train(const Dataset& data, const LabelPartition& partition, const cart::CartParams& params) {
    if (partition.blocks.element_count() != data.label_count())
        throw InvalidArgument("partition covers " + std::to_string(partition.blocks.element_count()) +
                              " labels, dataset has " + std::to_string(data.label_count()));
    EnsembleModel model{partition, {}};
    model.members.reserve(partition.blocks.block_count());
    for (const auto& block : partition.blocks.blocks()) model.members.push_back(lp_train(data, block, params));
    return model;
}

LabelSet ensemble_predict(const EnsembleModel& model, std::span<const double> x) {
    LabelSet out;
    for (const auto& m : model.members) {
        auto part = lp_predict(m, x);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

LabelMatrix predict_matrix(const std::function<LabelSet(std::span<const double>)>& predict,
                           const FeatureMatrix& features, std::size_t label_count) {
    LabelMatrix out(features.rows(), label_count);
    for (std::size_t r = 0; r < features.rows(); ++r)
        for (auto j : predict(features.row(r))) out(r, j) = 1;
    return out;
}

}  // namespace lsp::transform
