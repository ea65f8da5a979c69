#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsp/matrix.hpp"

namespace lsp {

struct AttributeMeta {
    enum class Kind { numeric, nominal };

    std::string name;
    Kind kind = Kind::numeric;
    std::vector<std::string> categories;  // nominal only, declaration order = integer code

    friend bool operator==(const AttributeMeta&, const AttributeMeta&) = default;
};

/// Multi-label dataset: feature matrix, 0/1 label matrix and label names.
/// Immutable once constructed; the constructor checks every invariant.
class Dataset {
public:
    Dataset() = default;
    Dataset(FeatureMatrix features, LabelMatrix labels, std::vector<std::string> label_names,
            std::vector<AttributeMeta> attribute_meta);

    const FeatureMatrix& features() const noexcept { return features_; }
    const LabelMatrix& labels() const noexcept { return labels_; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }
    const std::vector<AttributeMeta>& attribute_meta() const noexcept { return attribute_meta_; }

    std::size_t instance_count() const noexcept { return labels_.rows(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }
    std::size_t feature_count() const noexcept { return attribute_meta_.size(); }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    FeatureMatrix features_;
    LabelMatrix labels_;
    std::vector<std::string> label_names_;
    std::vector<AttributeMeta> attribute_meta_;
};

struct DatasetPair {
    Dataset train;
    Dataset test;
};

/// Label names from a MULAN XML label header, in document order. Nested
/// (hierarchical) label elements are flattened depth-first.
std::vector<std::string> parse_label_header(std::string_view xml_text);

/// Parses dense or sparse ARFF; columns named in `label_names` become labels
/// (in that order), all other attributes become features.
Dataset parse_arff(std::string_view arff_text, std::span<const std::string> label_names);

DatasetPair load_pair(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                      const std::filesystem::path& xml_path);

/// Dense ARFF with feature columns first and labels as {0,1} nominals.
void write_arff(std::ostream& out, const Dataset& data, std::string_view relation);
void write_label_header(std::ostream& out, std::span<const std::string> label_names);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace lsp
